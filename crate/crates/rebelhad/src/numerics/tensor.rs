//! Dense NCHW tensor in double precision.

use crate::hsidata::HsiCube;
use crate::{Error, Result};

/// A 4-axis tensor (batch, channels, height, width), row-major with width
/// innermost. Lower-rank data uses size-1 axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: [usize; 4],
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(shape: [usize; 4]) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.iter().product()],
        }
    }

    pub fn from_vec(shape: [usize; 4], data: Vec<f64>) -> Result<Self> {
        let expect: usize = shape.iter().product();
        if data.len() != expect {
            return Err(Error::Shape(format!(
                "tensor payload has {} values, expected {expect} for {shape:?}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.shape[0]
    }
    #[inline]
    pub fn c(&self) -> usize {
        self.shape[1]
    }
    #[inline]
    pub fn h(&self) -> usize {
        self.shape[2]
    }
    #[inline]
    pub fn w(&self) -> usize {
        self.shape[3]
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn at(&self, n: usize, c: usize, y: usize, x: usize) -> f64 {
        self.data[((n * self.shape[1] + c) * self.shape[2] + y) * self.shape[3] + x]
    }

    #[inline]
    pub fn at_mut(&mut self, n: usize, c: usize, y: usize, x: usize) -> &mut f64 {
        &mut self.data[((n * self.shape[1] + c) * self.shape[2] + y) * self.shape[3] + x]
    }

    /// One (batch, channel) spatial plane, row-major.
    #[inline]
    pub fn plane(&self, n: usize, c: usize) -> &[f64] {
        let hw = self.shape[2] * self.shape[3];
        let off = (n * self.shape[1] + c) * hw;
        &self.data[off..off + hw]
    }

    #[inline]
    pub fn plane_mut(&mut self, n: usize, c: usize) -> &mut [f64] {
        let hw = self.shape[2] * self.shape[3];
        let off = (n * self.shape[1] + c) * hw;
        &mut self.data[off..off + hw]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor {
        Tensor {
            shape: self.shape,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, s: f64) -> Tensor {
        self.map(|v| v * s)
    }

    pub fn dot(&self, other: &Tensor) -> f64 {
        debug_assert_eq!(self.shape, other.shape);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Numerical(format!("non-finite values in {what}")))
        }
    }

    /// Widen a cube into a (1, bands, h, w) tensor; band planes map directly
    /// onto channel planes.
    pub fn from_cube(cube: &HsiCube) -> Tensor {
        Tensor {
            shape: [1, cube.bands, cube.height, cube.width],
            data: cube.data.iter().map(|&v| v as f64).collect(),
        }
    }

    /// Stack cubes of identical dimensions into a batch tensor.
    pub fn from_cubes(cubes: &[&HsiCube]) -> Result<Tensor> {
        let first = cubes
            .first()
            .ok_or_else(|| Error::Shape("empty cube batch".into()))?;
        let (h, w, b) = (first.height, first.width, first.bands);
        let mut data = Vec::with_capacity(cubes.len() * b * h * w);
        for cube in cubes {
            if (cube.height, cube.width, cube.bands) != (h, w, b) {
                return Err(Error::Shape(format!(
                    "cube batch dimension mismatch: {}x{}x{} vs {h}x{w}x{b}",
                    cube.height, cube.width, cube.bands
                )));
            }
            data.extend(cube.data.iter().map(|&v| v as f64));
        }
        Ok(Tensor {
            shape: [cubes.len(), b, h, w],
            data,
        })
    }

    /// Extract batch item `n` as a cube (narrowing to f32).
    pub fn to_cube(&self, n: usize) -> HsiCube {
        let [_, c, h, w] = self.shape;
        let chw = c * h * w;
        HsiCube {
            height: h,
            width: w,
            bands: c,
            data: self.data[n * chw..(n + 1) * chw]
                .iter()
                .map(|&v| v as f32)
                .collect(),
        }
    }

    /// Concatenate along the channel axis.
    pub fn concat_channels(parts: &[&Tensor]) -> Tensor {
        let [n, _, h, w] = parts[0].shape;
        let total_c: usize = parts.iter().map(|p| p.c()).sum();
        let mut out = Tensor::zeros([n, total_c, h, w]);
        for ni in 0..n {
            let mut co = 0;
            for p in parts {
                debug_assert_eq!([p.n(), p.h(), p.w()], [n, h, w]);
                for ci in 0..p.c() {
                    out.plane_mut(ni, co + ci).copy_from_slice(p.plane(ni, ci));
                }
                co += p.c();
            }
        }
        out
    }

    /// Copy channels [c0, c0+len) into a new tensor.
    pub fn slice_channels(&self, c0: usize, len: usize) -> Tensor {
        let [n, _, h, w] = self.shape;
        let mut out = Tensor::zeros([n, len, h, w]);
        for ni in 0..n {
            for ci in 0..len {
                out.plane_mut(ni, ci).copy_from_slice(self.plane(ni, c0 + ci));
            }
        }
        out
    }
}
