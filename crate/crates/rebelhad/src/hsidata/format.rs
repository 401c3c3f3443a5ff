//! HCF1 cube files and binary PGM masks.
//!
//! HCF1 layout: bytes 0-3 magic `HCF1`; bytes 4-15 three unsigned 32-bit
//! little-endian integers height, width, bands; then height*width*bands
//! IEEE-754 32-bit little-endian floats, band-sequential, row-major. Score
//! maps are HCF1 cubes with bands = 1.
//!
//! Masks are binary PGM (P5) with maxval 255: 0 = background, 255 = anomaly.

use super::{GroundTruthMask, HsiCube};
use crate::fsutil::atomic_write;
use crate::{Error, Result};
use std::path::Path;

const MAGIC: &[u8; 4] = b"HCF1";

pub fn write_cube(cube: &HsiCube, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 + cube.data.len() * 4);
    bytes.extend_from_slice(MAGIC);
    for dim in [cube.height, cube.width, cube.bands] {
        let v = u32::try_from(dim)
            .map_err(|_| Error::Format(format!("dimension overflow writing cube: {dim}")))?;
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    for &v in &cube.data {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    atomic_write(path, &bytes)
}

pub fn read_cube(path: &Path) -> Result<HsiCube> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Format(format!("bad magic in {}", path.display())));
    }
    if bytes.len() < 16 {
        return Err(Error::Format(format!(
            "truncated header in {}: {} bytes",
            path.display(),
            bytes.len()
        )));
    }
    let dim = |i: usize| -> u64 {
        u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as u64
    };
    let (h, w, b) = (dim(0), dim(1), dim(2));
    for (name, v) in [("height", h), ("width", w), ("bands", b)] {
        if v == 0 {
            return Err(Error::Format(format!("{name} must be >= 1 in {}", path.display())));
        }
    }
    let count = h
        .checked_mul(w)
        .and_then(|p| p.checked_mul(b))
        .filter(|&c| c <= (usize::MAX as u64) / 4)
        .ok_or_else(|| Error::Format(format!("dimension overflow: {h}x{w}x{b}")))?;
    let payload = &bytes[16..];
    let expect = (count * 4) as usize;
    if payload.len() < expect {
        return Err(Error::Format(format!(
            "truncated payload in {}: {} bytes, expected {expect}",
            path.display(),
            payload.len()
        )));
    }
    if payload.len() > expect {
        return Err(Error::Format(format!(
            "trailing bytes in {}: {} past payload",
            path.display(),
            payload.len() - expect
        )));
    }
    let data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    HsiCube::new(h as usize, w as usize, b as usize, data)
}

pub fn write_mask(mask: &GroundTruthMask, path: &Path) -> Result<()> {
    let mut bytes = format!("P5\n{} {}\n255\n", mask.width, mask.height).into_bytes();
    bytes.extend(mask.labels.iter().map(|&v| if v == 1 { 255u8 } else { 0 }));
    atomic_write(path, &bytes)
}

pub fn read_mask(path: &Path) -> Result<GroundTruthMask> {
    let bytes = std::fs::read(path)?;
    let mut pos = 0usize;
    let mut token = |what: &str| -> Result<String> {
        // Skip whitespace and # comments between header tokens.
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format(format!(
                "truncated PGM header in {}: missing {what}",
                path.display()
            )));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    if token("magic")? != "P5" {
        return Err(Error::Format(format!("bad magic in {}", path.display())));
    }
    let parse = |s: String, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad {what} '{s}' in {}", path.display())))
    };
    let width = parse(token("width")?, "width")?;
    let height = parse(token("height")?, "height")?;
    let maxval = parse(token("maxval")?, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!(
            "unsupported maxval {maxval} in {}",
            path.display()
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let need = height * width;
    if bytes.len() < pos + need {
        return Err(Error::Format(format!(
            "truncated payload in {}: {} raster bytes, expected {need}",
            path.display(),
            bytes.len().saturating_sub(pos)
        )));
    }
    let mut labels = Vec::with_capacity(need);
    for &v in &bytes[pos..pos + need] {
        match v {
            0 => labels.push(0),
            v if v as usize == maxval => labels.push(1),
            v => {
                return Err(Error::Format(format!(
                    "invalid mask value {v} in {} (expected 0 or {maxval})",
                    path.display()
                )))
            }
        }
    }
    GroundTruthMask::new(height, width, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn cube_round_trip_small() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        let cube = HsiCube::new(2, 2, 1, vec![0.0, 0.5, 0.5, 1.0]).unwrap();
        write_cube(&cube, &path).unwrap();
        assert_eq!(read_cube(&path).unwrap(), cube);
    }

    #[test]
    fn single_value_cube_is_20_bytes() {
        // 16-byte header (magic + three u32 dims) plus one 4-byte float.
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        write_cube(&HsiCube::new(1, 1, 1, vec![0.0]).unwrap(), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 20);
        assert_eq!(&bytes[..4], b"HCF1");
        assert_eq!(&bytes[4..16], &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(&bytes[16..], &0.0f32.to_le_bytes());
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        let mut bytes = b"HCF2".to_vec();
        bytes.extend_from_slice(&[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]);
        bytes.extend_from_slice(&0.0f32.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        let err = read_cube(&path).unwrap_err();
        assert!(err.to_string().contains("bad magic"), "{err}");
    }

    #[test]
    fn truncated_payload_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        let mut bytes = b"HCF1".to_vec();
        bytes.extend_from_slice(&[2, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0]);
        bytes.extend_from_slice(&0.5f32.to_le_bytes()); // 1 of 4 values
        std::fs::write(&path, &bytes).unwrap();
        let err = read_cube(&path).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
    }

    #[test]
    fn zero_dim_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        let mut bytes = b"HCF1".to_vec();
        bytes.extend_from_slice(&[0, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0]);
        std::fs::write(&path, &bytes).unwrap();
        let err = read_cube(&path).unwrap_err();
        assert!(err.to_string().contains("height"), "{err}");
    }

    #[test]
    fn overflow_dims_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.hcf");
        let mut bytes = b"HCF1".to_vec();
        for _ in 0..3 {
            bytes.extend_from_slice(&u32::MAX.to_le_bytes());
        }
        std::fs::write(&path, &bytes).unwrap();
        let err = read_cube(&path).unwrap_err();
        assert!(err.to_string().contains("dimension overflow"), "{err}");
    }

    #[test]
    fn unwritable_path_errors() {
        let cube = HsiCube::new(1, 1, 1, vec![0.0]).unwrap();
        let err = write_cube(&cube, Path::new("/nonexistent-dir/c.hcf"));
        assert!(err.is_err());
    }

    #[test]
    fn mask_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        let mask = GroundTruthMask::new(2, 3, vec![0, 1, 0, 1, 1, 0]).unwrap();
        write_mask(&mask, &path).unwrap();
        assert_eq!(read_mask(&path).unwrap(), mask);
    }

    #[test]
    fn mask_with_comment_parses() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        let mut bytes = b"P5\n# synthetic\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 255]);
        std::fs::write(&path, &bytes).unwrap();
        let mask = read_mask(&path).unwrap();
        assert_eq!(mask.labels, vec![0, 1]);
    }

    proptest::proptest! {
        #[test]
        fn cube_round_trip_is_identity(
            h in 1usize..=16, w in 1usize..=16, b in 1usize..=16,
            seed in proptest::num::u64::ANY,
        ) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let data: Vec<f32> = (0..h * w * b).map(|_| rng.uniform(-10.0, 10.0) as f32).collect();
            let cube = HsiCube::new(h, w, b, data).unwrap();
            let dir = tempdir().unwrap();
            let path = dir.path().join("c.hcf");
            write_cube(&cube, &path).unwrap();
            let back = read_cube(&path).unwrap();
            proptest::prop_assert_eq!(back, cube);
        }
    }
}
