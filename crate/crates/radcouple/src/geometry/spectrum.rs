//! Principal curvature spectra of geodesic spheres.

use arrayvec::ArrayVec;

/// One eigenvalue branch of the shape operator with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub kappa: f64,
    pub multiplicity: u32,
}

/// Every model in the zoo has at most two distinct curvature branches.
pub(crate) type EntryBuf = ArrayVec<SpectrumEntry, 2>;

/// Principal curvatures of the geodesic sphere of radius `r`, together with
/// the mean curvature `A(r) = Σ mult·κ` and the absolute sum `Σ mult·|κ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSpectrum {
    r: f64,
    entries: Vec<SpectrumEntry>,
    mean: f64,
    abs_sum: f64,
}

impl CurvatureSpectrum {
    pub(crate) fn from_entries(r: f64, entries: &[SpectrumEntry]) -> Self {
        let mut mean = 0.0;
        let mut abs_sum = 0.0;
        for e in entries {
            mean += e.multiplicity as f64 * e.kappa;
            abs_sum += e.multiplicity as f64 * e.kappa.abs();
        }
        CurvatureSpectrum {
            r,
            entries: entries.to_vec(),
            mean,
            abs_sum,
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Mean curvature `A(r)`, equal to `Δr`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `Σ mult·|κ|`; half the width of the drift window.
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Number of tangential directions `n − 1`.
    pub fn tangential_dim(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity as usize).sum()
    }

    /// Curvatures expanded entry-by-entry to one value per tangential
    /// direction, in block order.
    pub fn expanded(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.kappa).take(e.multiplicity as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates_are_consistent() {
        let s = CurvatureSpectrum::from_entries(
            1.0,
            &[
                SpectrumEntry {
                    kappa: 2.0,
                    multiplicity: 2,
                },
                SpectrumEntry {
                    kappa: -0.5,
                    multiplicity: 1,
                },
            ],
        );
        assert!((s.mean() - 3.5).abs() < 1e-15);
        assert!((s.abs_sum() - 4.5).abs() < 1e-15);
        assert_eq!(s.tangential_dim(), 3);
        assert_eq!(s.expanded().collect::<Vec<_>>(), vec![2.0, 2.0, -0.5]);
        assert!(s.abs_sum() >= s.mean().abs());
    }
}
