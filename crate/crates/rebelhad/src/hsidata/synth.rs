//! Synthetic background/anomaly scene generator.
//!
//! A scene is a nonnegative mixture of `E` random smooth abundance fields
//! with `E` random endmember spectra. Anomalies are axis-aligned squares
//! whose spectra are the local background displaced by `anomaly_contrast`
//! along a random unit spectral direction, so at zero contrast the implants
//! are statistically indistinguishable from background. White noise is added
//! to every pixel and the cube is min-max normalized at the end.
//!
//! Draw order from the single SplitMix64 stream (fixed so a seed reproduces
//! the scene in any implementation):
//!   1. endmember spectra, E x bands uniforms in [0, 1);
//!   2. abundance fields, E x (height*width) uniforms, then box blur;
//!   3. per anomaly: placement attempts (two uniform ints each), then a
//!      spectral direction of `bands` standard normals;
//!   4. white noise, one normal per value in band-sequential order.

use super::{GroundTruthMask, HsiCube, SceneSpec};
use crate::rng::SplitMix64;
use crate::{Error, Result};

const PLACEMENT_RETRIES: usize = 1000;

pub fn synth_scene(spec: &SceneSpec) -> Result<(HsiCube, GroundTruthMask)> {
    validate(spec)?;
    let (h, w, b) = (spec.height, spec.width, spec.bands);
    let pixels = h * w;
    let mut rng = SplitMix64::new(spec.seed);

    let spectra: Vec<Vec<f64>> = (0..spec.endmembers)
        .map(|_| (0..b).map(|_| rng.next_f64()).collect())
        .collect();

    let mut cube = vec![0.0f64; pixels * b];
    for spectrum in &spectra {
        let mut field: Vec<f64> = (0..pixels).map(|_| rng.next_f64()).collect();
        box_blur(&mut field, h, w, spec.smoothness);
        for (band, &s) in spectrum.iter().enumerate() {
            let plane = &mut cube[band * pixels..(band + 1) * pixels];
            for (p, &a) in plane.iter_mut().zip(field.iter()) {
                *p += a * s;
            }
        }
    }

    let mut mask = GroundTruthMask::zeros(h, w);
    let mut placed: Vec<(usize, usize)> = Vec::new();
    let size = spec.anomaly_size;
    for i in 0..spec.anomaly_count {
        let (y0, x0) = place_square(&mut rng, h, w, size, &placed).ok_or_else(|| {
            Error::Scene(format!(
                "could not place anomaly {i} after {PLACEMENT_RETRIES} retries \
                 ({}x{} squares with 1-pixel separation in a {h}x{w} scene)",
                size, size
            ))
        })?;
        placed.push((y0, x0));

        let mut dir: Vec<f64> = (0..b).map(|_| rng.normal()).collect();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm > 0.0 {
            for d in &mut dir {
                *d /= norm;
            }
        }
        for band in 0..b {
            let shift = spec.anomaly_contrast * dir[band];
            let plane = &mut cube[band * pixels..(band + 1) * pixels];
            for y in y0..y0 + size {
                for x in x0..x0 + size {
                    plane[y * w + x] += shift;
                }
            }
        }
        for y in y0..y0 + size {
            for x in x0..x0 + size {
                mask.labels[y * w + x] = 1;
            }
        }
    }

    if spec.noise_sigma > 0.0 {
        for v in &mut cube {
            *v += spec.noise_sigma * rng.normal();
        }
    }

    // Final global min-max normalization in double precision.
    let lo = cube.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cube.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let data: Vec<f32> = if range > 0.0 {
        cube.iter().map(|&v| ((v - lo) / range) as f32).collect()
    } else {
        vec![0.0; cube.len()]
    };
    Ok((HsiCube::new(h, w, b, data)?, mask))
}

fn validate(spec: &SceneSpec) -> Result<()> {
    if spec.height == 0 || spec.width == 0 || spec.bands == 0 {
        return Err(Error::Scene(format!(
            "scene dimensions must be >= 1, got {}x{}x{}",
            spec.height, spec.width, spec.bands
        )));
    }
    if spec.endmembers < 2 {
        return Err(Error::Scene(format!(
            "endmembers must be >= 2, got {}",
            spec.endmembers
        )));
    }
    if spec.anomaly_count > 0 && (spec.anomaly_size == 0 || spec.anomaly_size > spec.height.min(spec.width))
    {
        return Err(Error::Scene(format!(
            "anomaly size {} does not fit a {}x{} scene",
            spec.anomaly_size, spec.height, spec.width
        )));
    }
    if spec.anomaly_contrast < 0.0 {
        return Err(Error::Scene("anomaly_contrast must be >= 0".into()));
    }
    if spec.noise_sigma < 0.0 {
        return Err(Error::Scene("noise_sigma must be >= 0".into()));
    }
    Ok(())
}

/// Uniform placement of a size x size square, rejecting overlap with any
/// previously placed square including a 1-pixel separation border.
fn place_square(
    rng: &mut SplitMix64,
    h: usize,
    w: usize,
    size: usize,
    placed: &[(usize, usize)],
) -> Option<(usize, usize)> {
    for _ in 0..PLACEMENT_RETRIES {
        let y = rng.below((h - size + 1) as u64) as usize;
        let x = rng.below((w - size + 1) as u64) as usize;
        let clear = placed.iter().all(|&(py, px)| {
            // Dilate the candidate by 1 pixel and test rectangle overlap.
            let sep = (y + size + 1 <= py) || (py + size + 1 <= y);
            let sep_x = (x + size + 1 <= px) || (px + size + 1 <= x);
            sep || sep_x
        });
        if clear {
            return Some((y, x));
        }
    }
    None
}

/// In-place separable box blur with border-clamped windows; radius 0 is the
/// identity.
fn box_blur(field: &mut [f64], h: usize, w: usize, radius: usize) {
    if radius == 0 {
        return;
    }
    let mut tmp = vec![0.0f64; field.len()];
    // Horizontal pass.
    for y in 0..h {
        let row = &field[y * w..(y + 1) * w];
        for x in 0..w {
            let lo = x.saturating_sub(radius);
            let hi = (x + radius + 1).min(w);
            let sum: f64 = row[lo..hi].iter().sum();
            tmp[y * w + x] = sum / (hi - lo) as f64;
        }
    }
    // Vertical pass.
    for x in 0..w {
        for y in 0..h {
            let lo = y.saturating_sub(radius);
            let hi = (y + radius + 1).min(h);
            let mut sum = 0.0;
            for yy in lo..hi {
                sum += tmp[yy * w + x];
            }
            field[y * w + x] = sum / (hi - lo) as f64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SceneSpec {
        SceneSpec {
            height: 32,
            width: 32,
            bands: 8,
            endmembers: 3,
            anomaly_count: 2,
            anomaly_size: 3,
            anomaly_contrast: 1.0,
            noise_sigma: 0.02,
            smoothness: 4,
            seed: 11,
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let (c1, m1) = synth_scene(&spec()).unwrap();
        let (c2, m2) = synth_scene(&spec()).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(m1, m2);
    }

    #[test]
    fn no_anomalies_means_empty_mask() {
        let mut s = spec();
        s.anomaly_count = 0;
        let (_, mask) = synth_scene(&s).unwrap();
        assert_eq!(mask.anomaly_count(), 0);
    }

    #[test]
    fn mask_cardinality_is_exact() {
        let (_, mask) = synth_scene(&spec()).unwrap();
        assert_eq!(mask.anomaly_count(), 2 * 3 * 3);
    }

    #[test]
    fn output_is_normalized() {
        let (cube, _) = synth_scene(&spec()).unwrap();
        let lo = cube.data.iter().copied().fold(f32::INFINITY, f32::min);
        let hi = cube.data.iter().copied().fold(f32::NEG_INFINITY, f32::max);
        assert_eq!(lo, 0.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn oversized_anomaly_rejected() {
        let mut s = spec();
        s.anomaly_size = 40;
        assert!(matches!(synth_scene(&s), Err(Error::Scene(_))));
    }

    #[test]
    fn crowded_scene_errors_after_retries() {
        let mut s = spec();
        s.height = 8;
        s.width = 8;
        s.anomaly_size = 4;
        s.anomaly_count = 4; // cannot fit four separated 4x4 squares in 8x8
        assert!(matches!(synth_scene(&s), Err(Error::Scene(_))));
    }

    #[test]
    fn different_seeds_differ() {
        let (c1, _) = synth_scene(&spec()).unwrap();
        let mut s2 = spec();
        s2.seed = 12;
        let (c2, _) = synth_scene(&s2).unwrap();
        assert_ne!(c1, c2);
    }

    #[test]
    fn anomalies_respect_separation() {
        let mut s = spec();
        s.anomaly_count = 6;
        let (_, mask) = synth_scene(&s).unwrap();
        assert_eq!(mask.anomaly_count(), 6 * 9);
        // Every labeled pixel belongs to a full 3x3 block; blocks do not touch.
        // Check by counting 8-connected components via a simple flood fill.
        let mut seen = vec![false; mask.labels.len()];
        let mut components = 0;
        for start in 0..mask.labels.len() {
            if mask.labels[start] == 0 || seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            let mut count = 0;
            while let Some(p) = stack.pop() {
                if seen[p] || mask.labels[p] == 0 {
                    continue;
                }
                seen[p] = true;
                count += 1;
                let (y, x) = (p / s.width, p % s.width);
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (ny, nx) = (y as i64 + dy, x as i64 + dx);
                        if ny >= 0 && nx >= 0 && (ny as usize) < s.height && (nx as usize) < s.width
                        {
                            stack.push(ny as usize * s.width + nx as usize);
                        }
                    }
                }
            }
            assert_eq!(count, 9, "square {components} has {count} pixels");
        }
        assert_eq!(components, 6);
    }
}
