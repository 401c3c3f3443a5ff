//! Hyperspectral cube data model, file formats, and the synthetic
//! background/anomaly scene generator used for training and evaluation.
//!
//! Cubes are stored band-sequential (one full height x width plane per band,
//! row-major within a plane) with `f32` payloads, matching the on-disk HCF1
//! format exactly so that write-then-read is bitwise identity. All numeric
//! processing elsewhere in the crate happens in `f64`.

mod format;
mod synth;

pub use format::{read_cube, read_mask, write_cube, write_mask};
pub use synth::synth_scene;

use crate::{Error, Result};

/// A height x width x bands radiance cube.
///
/// `data.len() == height * width * bands`; plane `b` occupies
/// `data[b*height*width .. (b+1)*height*width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub data: Vec<f32>,
}

impl HsiCube {
    pub fn new(height: usize, width: usize, bands: usize, data: Vec<f32>) -> Result<Self> {
        if height == 0 || width == 0 || bands == 0 {
            return Err(Error::Shape(format!(
                "cube dimensions must be >= 1, got {height}x{width}x{bands}"
            )));
        }
        let expect = height
            .checked_mul(width)
            .and_then(|p| p.checked_mul(bands))
            .ok_or_else(|| {
                Error::Shape(format!("dimension overflow: {height}x{width}x{bands}"))
            })?;
        if data.len() != expect {
            return Err(Error::Shape(format!(
                "cube payload has {} values, expected {expect} for {height}x{width}x{bands}",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            bands,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, bands: usize) -> Self {
        Self {
            height,
            width,
            bands,
            data: vec![0.0; height * width * bands],
        }
    }

    pub fn pixels(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn value(&self, band: usize, y: usize, x: usize) -> f32 {
        self.data[(band * self.height + y) * self.width + x]
    }

    /// One band plane, row-major.
    pub fn plane(&self, band: usize) -> &[f32] {
        let p = self.pixels();
        &self.data[band * p..(band + 1) * p]
    }

    /// Spectrum of pixel (y, x) gathered across bands, in `f64`.
    pub fn spectrum(&self, y: usize, x: usize) -> Vec<f64> {
        (0..self.bands)
            .map(|b| self.value(b, y, x) as f64)
            .collect()
    }

    /// Keep the first `k` band planes, order preserved.
    pub fn select_bands(&self, first_k: usize) -> Result<HsiCube> {
        if first_k == 0 || first_k > self.bands {
            return Err(Error::Shape(format!(
                "band selection out of range: k={first_k}, cube has {} bands",
                self.bands
            )));
        }
        Ok(HsiCube {
            height: self.height,
            width: self.width,
            bands: first_k,
            data: self.data[..first_k * self.pixels()].to_vec(),
        })
    }

    /// Global min-max scaling to [0, 1]. A constant cube maps to all zeros so
    /// downstream SSIM and RX stay defined.
    pub fn normalize(&self) -> HsiCube {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.data {
            let v = v as f64;
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        let range = hi - lo;
        let data = if range > 0.0 {
            self.data
                .iter()
                .map(|&v| (((v as f64) - lo) / range) as f32)
                .collect()
        } else {
            vec![0.0; self.data.len()]
        };
        HsiCube {
            height: self.height,
            width: self.width,
            bands: self.bands,
            data,
        }
    }
}

/// Per-pixel anomaly labels paired with a cube (1 = anomaly).
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthMask {
    pub height: usize,
    pub width: usize,
    pub labels: Vec<u8>,
}

impl GroundTruthMask {
    pub fn new(height: usize, width: usize, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != height * width {
            return Err(Error::Shape(format!(
                "mask has {} labels, expected {}",
                labels.len(),
                height * width
            )));
        }
        if let Some(bad) = labels.iter().find(|&&v| v > 1) {
            return Err(Error::Format(format!("invalid mask label {bad}")));
        }
        Ok(Self {
            height,
            width,
            labels,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            labels: vec![0; height * width],
        }
    }

    pub fn anomaly_count(&self) -> usize {
        self.labels.iter().filter(|&&v| v == 1).count()
    }
}

/// Parameters of the synthetic scene generator.
///
/// The background is a nonnegative mixture of `endmembers` random smooth
/// abundance fields with random endmember spectra plus white noise; anomalies
/// are axis-aligned squares whose spectra are displaced from the local
/// background by `anomaly_contrast` along a random spectral direction.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SceneSpec {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    /// Number of background endmembers, >= 2.
    pub endmembers: usize,
    pub anomaly_count: usize,
    /// Side length of each square anomaly, in pixels.
    pub anomaly_size: usize,
    /// Magnitude of the spectral displacement applied to anomaly pixels.
    pub anomaly_contrast: f64,
    /// Standard deviation of the white noise added to every pixel.
    pub noise_sigma: f64,
    /// Box-blur radius applied to the abundance fields.
    pub smoothness: usize,
    pub seed: u64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            height: 64,
            width: 64,
            bands: 20,
            endmembers: 4,
            anomaly_count: 0,
            anomaly_size: 4,
            anomaly_contrast: 1.0,
            noise_sigma: 0.02,
            smoothness: 8,
            seed: 0,
        }
    }
}
