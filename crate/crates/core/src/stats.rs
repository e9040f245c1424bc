//! Small numeric summaries shared by the diagnostics.

use std::fmt;

/// Closed range `[min, max]` of sampled ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub min: f64,
    pub max: f64,
}

impl Band {
    pub fn point(v: f64) -> Self {
        Self { min: v, max: v }
    }

    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Option<Self> {
        let mut it = values.into_iter();
        let first = it.next()?;
        let mut band = Band::point(first);
        for v in it {
            band.include(v);
        }
        Some(band)
    }

    pub fn include(&mut self, v: f64) {
        if v < self.min {
            self.min = v;
        }
        if v > self.max {
            self.max = v;
        }
    }

    /// `max / min`; infinite when `min` is zero.
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.min >= lo && self.max <= hi
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.min, self.max)
    }
}

/// Three-valued outcome of a finite-sample class test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Member => "member",
            Membership::NonMember => "non-member",
            Membership::Inconclusive => "inconclusive",
        })
    }
}

/// Least-squares slope of `y` against `x`; `None` with fewer than two
/// distinct abscissae.
pub fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        let pts: Vec<_> = (0..5).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect();
        assert!((ls_slope(&pts).unwrap() - 3.0).abs() < 1e-14);
        assert!(ls_slope(&[(1.0, 2.0)]).is_none());
        assert!(ls_slope(&[(1.0, 2.0), (1.0, 3.0)]).is_none());
    }

    #[test]
    fn band_tracks_extremes() {
        let b = Band::from_values([2.0, 0.5, 3.0]).unwrap();
        assert_eq!((b.min, b.max), (0.5, 3.0));
        assert_eq!(b.spread(), 6.0);
        assert!(Band::from_values(std::iter::empty()).is_none());
    }
}
