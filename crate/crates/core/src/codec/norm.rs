use crate::error::{Error, Result};

/// Min-max statistics mapping training inputs onto `[0, 1]`, the range of
/// the decoder's sigmoid output. Stored with the model and shared with the
/// decoding side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormStats {
    min: f64,
    max: f64,
}

impl NormStats {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::invalid(
                "normalization statistics",
                alloc::format!("need finite min < max, got [{min}, {max}]"),
            ));
        }
        Ok(NormStats { min, max })
    }

    /// Statistics over every element of `samples`. A constant sample set is
    /// widened by one on each side so the map stays invertible.
    pub fn fit<'a, I: IntoIterator<Item = &'a [f64]>>(samples: I) -> Result<Self> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for s in samples {
            for &v in s {
                if !v.is_finite() {
                    return Err(Error::invalid("training sample", "values must be finite"));
                }
                min = min.min(v);
                max = max.max(v);
            }
        }
        if min > max {
            return Err(Error::invalid("training set", "no values"));
        }
        if min == max {
            return NormStats::new(min - 1.0, max + 1.0);
        }
        NormStats::new(min, max)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// `(v - min) / (max - min)`, clipped to `[0, 1]`.
    pub fn normalize(&self, v: &[f64]) -> alloc::vec::Vec<f64> {
        let span = self.max - self.min;
        v.iter()
            .map(|x| ((x - self.min) / span).clamp(0.0, 1.0))
            .collect()
    }

    pub fn denormalize(&self, v: &[f64]) -> alloc::vec::Vec<f64> {
        let span = self.max - self.min;
        v.iter().map(|x| self.min + x * span).collect()
    }
}

impl Default for NormStats {
    fn default() -> Self {
        NormStats {
            min: -1.0,
            max: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_clipping() {
        let s = NormStats::new(-2.0, 6.0).unwrap();
        assert_eq!(s.normalize(&[-2.0, 6.0, 2.0]), [0.0, 1.0, 0.5]);
        assert_eq!(s.normalize(&[-10.0, 7.0]), [0.0, 1.0]);
    }

    #[test]
    fn round_trip_in_range() {
        let s = NormStats::new(-0.37, 1.91).unwrap();
        let v = [-0.37, 0.0, 0.123456789, 1.9, 1.91];
        for (a, b) in v.iter().zip(s.denormalize(&s.normalize(&v))) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_rejected() {
        assert!(NormStats::new(1.0, 1.0).is_err());
        assert!(NormStats::new(2.0, 1.0).is_err());
        assert!(NormStats::new(f64::NAN, 1.0).is_err());
        let s = NormStats::fit([&[3.0, 3.0][..]]).unwrap();
        assert_eq!((s.min(), s.max()), (2.0, 4.0));
    }
}
