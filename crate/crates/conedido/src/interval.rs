//! Finite unions of intervals in (0, ∞) and the 1-D weighted Dido
//! symmetrization: for a nondecreasing weight, the anchored interval
//! (0, d) of equal measure never has larger weighted perimeter.

use crate::error::{Error, Result};
use crate::quad;

/// A finite list of disjoint ordered intervals (a_j, b_j) in [0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev_end = -1.0;
        for &(a, b) in &intervals {
            if !(a >= 0.0 && a < b) {
                return Err(Error::Precondition(format!("invalid interval ({a}, {b})")));
            }
            if a <= prev_end {
                return Err(Error::Precondition("intervals must be disjoint and increasing".into()));
            }
            prev_end = b;
        }
        Ok(IntervalSet { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn upper_bound(&self) -> f64 {
        self.intervals.last().map(|&(_, b)| b).unwrap_or(0.0)
    }

    /// ν-measure ∫_M φ.
    pub fn measure<F: Fn(f64) -> f64>(&self, phi: &F) -> Result<f64> {
        let mut acc = 0.0;
        for &(a, b) in &self.intervals {
            acc += quad::integrate(phi, a, b, 1e-12, 1e-10)?;
        }
        Ok(acc)
    }

    /// Weighted perimeter Σ_j φ(a_j) + φ(b_j).
    pub fn perimeter<F: Fn(f64) -> f64>(&self, phi: &F) -> f64 {
        self.intervals.iter().map(|&(a, b)| phi(a) + phi(b)).sum()
    }
}

fn check_nondecreasing<F: Fn(f64) -> f64>(phi: &F, hi: f64) -> Result<()> {
    let samples = 2048;
    let mut prev = phi(0.0);
    if !(prev >= 0.0) {
        return Err(Error::Precondition("weight must be positive".into()));
    }
    for i in 1..=samples {
        let t = hi * i as f64 / samples as f64;
        let v = phi(t);
        if v < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::Precondition(format!(
                "weight is decreasing near t = {t}"
            )));
        }
        prev = v;
    }
    Ok(())
}

/// Replaces the set by the anchored interval (0, d) of equal ν-measure.
/// Requires φ continuous, positive and nondecreasing on the spanned range.
pub fn interval_symmetrize<F: Fn(f64) -> f64>(s: &IntervalSet, phi: &F) -> Result<IntervalSet> {
    let hi = s.upper_bound();
    if s.intervals.is_empty() {
        return Ok(s.clone());
    }
    check_nondecreasing(phi, hi)?;
    let target = s.measure(phi)?;
    // ν((0,d)) = target; ν((0,hi)) >= target since (0,hi) ⊇ M
    let cum = |d: f64| quad::integrate(phi, 0.0, d, 1e-12, 1e-10).unwrap_or(f64::NAN);
    let d = quad::increasing_root(
        |t| cum(t) - target,
        phi,
        0.0,
        hi,
        1e-8,
        1e-10 * target.max(1.0),
    )?;
    IntervalSet::new(vec![(0.0, d)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight_translates_to_origin() {
        let s = IntervalSet::new(vec![(1.0, 2.0)]).unwrap();
        let phi = |_: f64| 1.0;
        let out = interval_symmetrize(&s, &phi).unwrap();
        let (a, b) = out.intervals()[0];
        assert!(a == 0.0 && (b - 1.0).abs() < 1e-9);
        assert!(s.perimeter(&phi) >= out.perimeter(&phi));
    }

    #[test]
    fn linear_weight_example() {
        // {(0,1),(2,3)} with φ(t)=t+1: ν = 3/2 + 7/2 = 5, so d solves
        // d²/2 + d = 5, d = √11 - 1; perimeter drops from 10 to 2 + d.
        let s = IntervalSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let phi = |t: f64| t + 1.0;
        assert!((s.measure(&phi).unwrap() - 5.0).abs() < 1e-10);
        let out = interval_symmetrize(&s, &phi).unwrap();
        let d_star = 11f64.sqrt() - 1.0;
        let (a, b) = out.intervals()[0];
        assert!(a == 0.0 && (b - d_star).abs() < 1e-8);
        assert!((s.perimeter(&phi) - 10.0).abs() < 1e-12);
        assert!((out.perimeter(&phi) - (2.0 + d_star)).abs() < 1e-7);
        // measure preserved
        assert!((out.measure(&phi).unwrap() - 5.0).abs() < 1e-8);
    }

    #[test]
    fn anchored_interval_is_fixed_point() {
        let s = IntervalSet::new(vec![(0.0, 1.3)]).unwrap();
        let phi = |t: f64| (0.5 * t * t).exp();
        let out = interval_symmetrize(&s, &phi).unwrap();
        let (a, b) = out.intervals()[0];
        assert!(a == 0.0 && (b - 1.3).abs() < 1e-8);
    }

    #[test]
    fn decreasing_weight_rejected() {
        let s = IntervalSet::new(vec![(0.5, 1.0)]).unwrap();
        let phi = |t: f64| 2.0 - t;
        assert!(interval_symmetrize(&s, &phi).is_err());
    }

    #[test]
    fn perimeter_never_increases_randomized() {
        use rand::Rng;
        let mut rng = rand::thread_rng();
        let phi = |t: f64| (0.3 * t * t).exp() * (1.0 + t);
        for _ in 0..50 {
            let mut pts: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..3.0)).collect();
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ivs: Vec<(f64, f64)> = pts
                .chunks(2)
                .filter(|ch| ch.len() == 2 && ch[1] - ch[0] > 1e-3)
                .map(|ch| (ch[0], ch[1]))
                .collect();
            if ivs.is_empty() {
                continue;
            }
            let s = IntervalSet::new(ivs).unwrap();
            let out = interval_symmetrize(&s, &phi).unwrap();
            assert!(out.perimeter(&phi) <= s.perimeter(&phi) + 1e-9);
            let (m0, m1) = (s.measure(&phi).unwrap(), out.measure(&phi).unwrap());
            assert!((m0 - m1).abs() <= 1e-8 * m0.max(1.0));
        }
    }
}
