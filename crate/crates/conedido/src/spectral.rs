//! The weighted Neumann eigenvalue on the half-circle, the stability
//! inequality for the density family, and the sharp weighted Hardy constant
//! on the quarter space with its extremal sequence.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::linalg::{tridiag_eigenvector, tridiag_smallest_eigenvalues};
use crate::quad;
use std::f64::consts::PI;

/// First nontrivial Neumann eigenvalue of −(sin^kθ u′)′ = λ sin^kθ u on
/// (0, π), with the eigenvector sampled at cell centers.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda1: f64,
    pub eigenvector: Vec<f64>,
    pub nodes: usize,
}

impl EigenResult {
    /// ∫ u sin^kθ dθ over the cell-centered quadrature.
    pub fn weighted_mean_defect(&self, k: f64) -> f64 {
        let h = PI / self.nodes as f64;
        let mut acc = 0.0;
        let mut norm = 0.0;
        for (i, &u) in self.eigenvector.iter().enumerate() {
            let w = ((i as f64 + 0.5) * h).sin().powf(k) * h;
            acc += u * w;
            norm += u * u * w;
        }
        acc / norm.sqrt().max(1e-300)
    }
}

/// Cell-centered finite volumes: face fluxes weighted by sin^k at the
/// faces, so the endpoint faces carry zero weight for k > 0 and the
/// Neumann condition needs no ghost values for k = 0 either.
pub fn neumann_eigenvalue(k: f64, nodes: usize) -> Result<EigenResult> {
    if nodes < 16 {
        return Err(Error::Precondition(format!("need at least 16 nodes, got {nodes}")));
    }
    if k < 0.0 {
        return Err(Error::Precondition(format!("exponent must be >= 0, got {k}")));
    }
    let n = nodes;
    let h = PI / n as f64;
    // harmonic-mean face coefficients between cell centers: exact for a
    // locally constant flux, which keeps second order through the
    // sin^k → 0 degeneracy at the ends (endpoint faces carry no flux)
    let faces: Vec<f64> = (0..=n)
        .map(|j| {
            if j == 0 || j == n {
                return Ok(0.0);
            }
            let lo = (j as f64 - 0.5) * h;
            let hi = (j as f64 + 0.5) * h;
            Ok(h / quad::integrate(|t: f64| t.sin().powf(-k), lo, hi, 0.0, 1e-12)?)
        })
        .collect::<Result<_>>()?;
    let face = |j: usize| faces[j];
    let mass: Vec<f64> = (0..n)
        .map(|i| {
            quad::integrate(|t: f64| t.sin().powf(k), i as f64 * h, (i as f64 + 1.0) * h, 0.0, 1e-12)
        })
        .collect::<Result<_>>()?;
    // symmetrized tridiagonal: T = M^{-1/2} A M^{-1/2}
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for i in 0..n {
        diag[i] = (face(i) + face(i + 1)) / (h * mass[i]);
        if i + 1 < n {
            off[i] = -face(i + 1) / (h * (mass[i] * mass[i + 1]).sqrt());
        }
    }
    let eigs = tridiag_smallest_eigenvalues(&diag, &off, 2);
    let lambda1 = eigs[1];
    let v = tridiag_eigenvector(&diag, &off, lambda1);
    let mut u: Vec<f64> = v.iter().zip(&mass).map(|(vi, mi)| vi / mi.sqrt()).collect();
    // remove any residual weighted mean and fix the sign at θ = 0
    let mtot: f64 = mass.iter().sum();
    let mean: f64 = u.iter().zip(&mass).map(|(ui, mi)| ui * mi).sum::<f64>() / mtot;
    for x in u.iter_mut() {
        *x -= mean;
    }
    let norm = u.iter().zip(&mass).map(|(ui, mi)| ui * ui * mi).sum::<f64>().sqrt();
    let sign = if u[0] < 0.0 { -1.0 } else { 1.0 };
    for x in u.iter_mut() {
        *x *= sign / norm;
    }
    Ok(EigenResult { lambda1, eigenvector: u, nodes })
}

/// N − 1 + r²[(A′/A)² − A″/A] for A(r) = a r^k e^{cr²}; the bracket is
/// −(A′/A)′ = k/r² − 2c, so the closed form is N − 1 + k − 2cr².
pub fn stability_rhs(d: &Density, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    Ok(d.n as f64 - 1.0 + d.k - 2.0 * d.c * r * r)
}

/// The quarter-space Hardy setting: dν = x_N^k |x|^m dx on
/// Q = {x₁ > 0, x_N > 0}.
#[derive(Debug, Clone, Copy)]
pub struct HardySpec {
    pub n: usize,
    pub k: f64,
    pub m: u32,
}

impl HardySpec {
    pub fn new(n: usize, k: f64, m: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("dimension must be >= 2, got {n}")));
        }
        if k < 0.0 {
            return Err(Error::Precondition(format!("exponent must be >= 0, got {k}")));
        }
        Ok(HardySpec { n, k, m })
    }

    fn gamma(&self) -> f64 {
        (self.n as f64 + self.m as f64 + self.k) / 2.0
    }
}

/// The sharp constant ((N+m+k)/2)² − m, cross-checked against the
/// equivalent two-term form ((N+m+k−2)/2)² + N + k − 1.
pub fn hardy_constant(spec: &HardySpec) -> f64 {
    let s = spec.n as f64 + spec.m as f64 + spec.k;
    let form1 = (s / 2.0) * (s / 2.0) - spec.m as f64;
    let form2 = ((s - 2.0) / 2.0) * ((s - 2.0) / 2.0) + spec.n as f64 + spec.k - 1.0;
    debug_assert!((form1 - form2).abs() <= 1e-12 * form1.abs().max(1.0));
    form1
}

/// Both closed forms of the constant, for the exactness check.
pub fn hardy_constant_forms(spec: &HardySpec) -> (f64, f64) {
    let s = spec.n as f64 + spec.m as f64 + spec.k;
    (
        (s / 2.0) * (s / 2.0) - spec.m as f64,
        ((s - 2.0) / 2.0) * ((s - 2.0) / 2.0) + spec.n as f64 + spec.k - 1.0,
    )
}

/// A function on the planar quarter disk annulus: logarithmically spaced
/// radii, uniform angles θ ∈ [0, π/2] measured from the x₁ axis, so
/// x₁ = r cosθ and x_N = r sinθ.
#[derive(Debug, Clone)]
pub struct QuarterFunction {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// row-major (radius, angle) values
    pub values: Vec<f64>,
}

impl QuarterFunction {
    pub fn sample<F: Fn(f64, f64) -> f64>(
        r_min: f64,
        r_max: f64,
        radial_nodes: usize,
        angles: usize,
        f: F,
    ) -> Result<Self> {
        if !(0.0 < r_min && r_min < r_max) || radial_nodes < 2 || angles < 2 {
            return Err(Error::Precondition("quarter grid needs 0 < r_min < r_max and >= 2 nodes per direction".into()));
        }
        let ratio = (r_max / r_min).ln();
        let radii: Vec<f64> = (0..=radial_nodes)
            .map(|i| r_min * (ratio * i as f64 / radial_nodes as f64).exp())
            .collect();
        let mut values = Vec::with_capacity((radial_nodes + 1) * (angles + 1));
        for &r in &radii {
            for j in 0..=angles {
                let t = 0.5 * PI * j as f64 / angles as f64;
                values.push(f(r, t));
            }
        }
        Ok(QuarterFunction { radii, angles, values })
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.angles + 1) + j]
    }
}

/// The Hardy Rayleigh quotient with the odd-extension-class diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct HardyQuotient {
    pub value: f64,
    /// true when u does not vanish on {x₁ = 0}, i.e. the function is
    /// outside the class covered by the sharp inequality
    pub outside_odd_class: bool,
}

/// ∫_Q |∇u|² dν / ∫_Q u² |x|^{−2} dν on the planar quarter annulus, by
/// trapezoid quadrature on the (log r, θ) grid with centered differences.
pub fn hardy_quotient(u: &QuarterFunction, spec: &HardySpec) -> Result<HardyQuotient> {
    if spec.n != 2 {
        return Err(Error::Precondition(
            "grid quotient is planar; use hardy_test_sequence for N > 2".into(),
        ));
    }
    let nr = u.radii.len() - 1;
    let na = u.angles;
    let ht = 0.5 * PI / na as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut edge_max = 0.0f64;
    let mut umax = 0.0f64;
    for i in 0..=nr {
        let r = u.radii[i];
        let (ilo, ihi) = (i.saturating_sub(1), (i + 1).min(nr));
        let dr = u.radii[ihi] - u.radii[ilo];
        // trapezoid cell width around node i in r
        let wr = 0.5
            * ((u.radii[(i + 1).min(nr)] - r) + (r - u.radii[i.saturating_sub(1)]));
        for j in 0..=na {
            let t = ht * j as f64;
            let v = u.value(i, j);
            umax = umax.max(v.abs());
            if j == na {
                edge_max = edge_max.max(v.abs());
            }
            let ur = (u.value(ihi, j) - u.value(ilo, j)) / dr;
            let (jlo, jhi) = (j.saturating_sub(1), (j + 1).min(na));
            let ut = (u.value(i, jhi) - u.value(i, jlo)) / ((jhi - jlo) as f64 * ht);
            let grad2 = ur * ur + (ut / r) * (ut / r);
            let wt = if j == 0 || j == na { 0.5 * ht } else { ht };
            let weight = (r * t.sin()).powf(spec.k) * r.powi(spec.m as i32) * r * wr * wt;
            num += grad2 * weight;
            den += v * v / (r * r) * weight;
        }
    }
    if den <= 0.0 {
        return Err(Error::Numerical("Hardy quotient denominator vanishes".into()));
    }
    Ok(HardyQuotient {
        value: num / den,
        outside_odd_class: edge_max > 1e-10 * umax.max(1e-300),
    })
}

/// The plateau cutoff of the extremal sequence: 0 on (0, 1/n], 1 on
/// [2/n, n], 0 on [2n, ∞), linear in log t across the two ramps.
pub fn plateau_cutoff(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    if t <= 1.0 / nf || t >= 2.0 * nf {
        0.0
    } else if t < 2.0 / nf {
        (t * nf).ln() / 2.0f64.ln()
    } else if t <= nf {
        1.0
    } else {
        (2.0 * nf / t).ln() / 2.0f64.ln()
    }
}

/// Rayleigh quotient of the extremal-sequence member
/// u_n = x₁ |x|^{−(N+m+k)/2} ψ_n(|x|).
///
/// For N = 2 this samples u_n on the quarter annulus and runs the grid
/// quotient; for N > 2 it uses the exact separable reduction
/// C(k,m) + ∫ψ′²t dt / ∫ψ²t⁻¹dt, whose angular factors cancel in
/// closed form.
pub fn hardy_test_sequence(spec: &HardySpec, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Precondition(format!("sequence index must be >= 2, got {n}")));
    }
    if n > 4096 {
        return Err(Error::Precondition(format!(
            "sequence index {n} exceeds the grid budget; use n <= 4096"
        )));
    }
    let nf = n as f64;
    let r_min = 0.5 / (2.0 * nf);
    let r_max = 2.0 * (2.0 * nf);
    if spec.n == 2 {
        let gamma = spec.gamma();
        let decades = (r_max / r_min).log10();
        let radial = ((decades * 256.0).ceil() as usize).max(256);
        let u = QuarterFunction::sample(r_min, r_max, radial, 128, |r, t| {
            t.cos() * r * r.powf(-gamma) * plateau_cutoff(n, r)
        })?;
        let q = hardy_quotient(&u, spec)?;
        Ok(q.value)
    } else {
        let c = hardy_constant(spec);
        // the ramps are linear in s = ln t, so both integrals are exact
        // closed forms in s: ∫ψ′²t dt = ∫(dψ/ds)²ds, ∫ψ²t⁻¹dt = ∫ψ²ds
        let l2 = 2.0f64.ln();
        let num = 2.0 / l2;
        let den = quad::integrate(
            |s| {
                let p = plateau_cutoff(n, s.exp());
                p * p
            },
            (1.0 / nf).ln(),
            (2.0 * nf).ln(),
            0.0,
            1e-12,
        )?;
        Ok(c + num / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_matches_closed_form() {
        for k in [0.0, 0.5, 1.0, 2.5] {
            let e = neumann_eigenvalue(k, 4096).unwrap();
            assert!(
                (e.lambda1 - (1.0 + k)).abs() < 1e-3,
                "k={k}: lambda1 = {}",
                e.lambda1
            );
            assert!(e.weighted_mean_defect(k).abs() < 1e-8);
        }
        // k = 0 is the classical half-circle with eigenfunction cos
        let e = neumann_eigenvalue(0.0, 4096).unwrap();
        assert!((e.lambda1 - 1.0).abs() < 1e-4);
        let h = PI / 4096.0;
        let scale = e.eigenvector[0] / (0.5 * h).cos();
        for (i, &u) in e.eigenvector.iter().enumerate().step_by(256) {
            let t = (i as f64 + 0.5) * h;
            assert!((u - scale * t.cos()).abs() < 1e-4 * scale.abs());
        }
    }

    #[test]
    fn eigenvalue_second_order_convergence() {
        for k in [0.0, 0.5, 1.0, 2.5] {
            let errs: Vec<f64> = [256usize, 1024, 4096]
                .iter()
                .map(|&n| (neumann_eigenvalue(k, n).unwrap().lambda1 - (1.0 + k)).abs())
                .collect();
            let p1 = (errs[0] / errs[1]).log2() / 2.0;
            let p2 = (errs[1] / errs[2]).log2() / 2.0;
            assert!(
                p1 > 1.5 && p2 > 1.5,
                "k={k}: orders {p1:.2}, {p2:.2} from {errs:?}"
            );
        }
    }

    #[test]
    fn rayleigh_quotient_of_cosine() {
        // ∫ sin²θ sin^kθ dθ / ∫ cos²θ sin^kθ dθ = 1 + k
        for k in [0.0, 1.0, 2.5] {
            let num = quad::integrate(|t: f64| t.sin().powi(2) * t.sin().powf(k), 0.0, PI, 0.0, 1e-12).unwrap();
            let den = quad::integrate(|t: f64| t.cos().powi(2) * t.sin().powf(k), 0.0, PI, 0.0, 1e-12).unwrap();
            assert!((num / den - (1.0 + k)).abs() < 1e-6);
        }
    }

    #[test]
    fn eigenvector_rejects_bad_input() {
        assert!(neumann_eigenvalue(0.0, 8).is_err());
        assert!(neumann_eigenvalue(-1.0, 64).is_err());
    }

    #[test]
    fn stability_closed_form() {
        let d = Density::half_space(0.0, 0.0, 2).unwrap();
        assert_eq!(stability_rhs(&d, 1.0).unwrap(), 1.0);
        let d = Density::half_space(3.0, 0.0, 4).unwrap();
        assert_eq!(stability_rhs(&d, 2.0).unwrap(), 6.0);
        let d = Density::half_space(1.0, 0.5, 3).unwrap();
        assert_eq!(stability_rhs(&d, 1.0).unwrap(), 2.0);
        assert!(stability_rhs(&d, 0.0).is_err());
    }

    #[test]
    fn stability_never_exceeds_eigenvalue() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let k = rng.gen_range(0.0..5.0);
            let c = rng.gen_range(0.0..3.0);
            let r = rng.gen_range(1e-6..10.0f64);
            let d = Density::half_space(k, c, 2).unwrap();
            let rhs = stability_rhs(&d, r).unwrap();
            assert!(rhs <= 1.0 + k + 1e-12);
            // bracket matches numerical differentiation of A
            let a = |r: f64| r.powf(k) * (c * r * r).exp();
            let h = 1e-5 * r;
            let la = (a(r + h).ln() - a(r - h).ln()) / (2.0 * h);
            let bracket = k / (r * r) - 2.0 * c;
            let lapp = (a(r + h).ln() - 2.0 * a(r).ln() + a(r - h).ln()) / (h * h);
            assert!((la - (k / r + 2.0 * c * r)).abs() < 1e-4 * (1.0 + la.abs()));
            assert!((-lapp - bracket).abs() < 1e-3 * (1.0 + bracket.abs()));
        }
    }

    #[test]
    fn hardy_constant_forms_agree() {
        for (n, k, m, want) in [(2, 0.0, 0, 1.0), (3, 1.0, 2, 7.0), (2, 2.0, 0, 4.0)] {
            let spec = HardySpec::new(n, k, m).unwrap();
            let (f1, f2) = hardy_constant_forms(&spec);
            assert!((f1 - f2).abs() < 1e-12);
            assert_eq!(hardy_constant(&spec), want);
        }
        assert!(HardySpec::new(1, 0.0, 0).is_err());
        assert!(HardySpec::new(2, -1.0, 0).is_err());
    }

    #[test]
    fn quotient_above_constant_for_test_functions() {
        let spec = HardySpec::new(2, 0.0, 0).unwrap();
        let u = QuarterFunction::sample(1e-3, 1.0, 512, 96, |r, t| {
            t.cos() * r * (1.0 - r).max(0.0)
        })
        .unwrap();
        let q = hardy_quotient(&u, &spec).unwrap();
        assert!(!q.outside_odd_class);
        assert!(q.value > 1.0, "quotient {}", q.value);

        // radial input gets flagged as outside the odd-extension class
        let v = QuarterFunction::sample(1e-3, 1.0, 128, 32, |r, _| r * (1.0 - r).max(0.0)).unwrap();
        let qv = hardy_quotient(&v, &spec).unwrap();
        assert!(qv.outside_odd_class);
    }

    #[test]
    fn extremal_sequence_monotone_from_above() {
        for (n, k, m) in [(2usize, 0.0, 0u32), (3, 1.0, 2), (2, 2.0, 0)] {
            let spec = HardySpec::new(n, k, m).unwrap();
            let c = hardy_constant(&spec);
            let mut prev = f64::INFINITY;
            for idx in [4usize, 8, 16, 32] {
                let q = hardy_test_sequence(&spec, idx).unwrap();
                assert!(q >= c - 1e-9, "N={n} k={k} m={m} n={idx}: {q} < {c}");
                assert!(q <= prev + 1e-6, "not nonincreasing at n={idx}: {q} vs {prev}");
                prev = q;
            }
        }
        assert!(hardy_test_sequence(&HardySpec::new(2, 0.0, 0).unwrap(), 1).is_err());
        assert!(hardy_test_sequence(&HardySpec::new(2, 0.0, 0).unwrap(), 100_000).is_err());
    }

    #[test]
    fn planar_sequence_matches_separable_reduction() {
        // the 2-D quadrature and the closed-form radial reduction must
        // agree: quotient = C + ∫ψ′²t dt / ∫ψ² t⁻¹ dt
        let spec = HardySpec::new(2, 0.0, 0).unwrap();
        for n in [4usize, 32] {
            let grid = hardy_test_sequence(&spec, n).unwrap();
            let nf = n as f64;
            let l2 = 2.0f64.ln();
            let den = quad::integrate(
                |s: f64| {
                    let p = plateau_cutoff(n, s.exp());
                    p * p
                },
                (1.0 / nf).ln(),
                (2.0 * nf).ln(),
                0.0,
                1e-12,
            )
            .unwrap();
            let exact = 1.0 + (2.0 / l2) / den;
            // the cutoff's log-ramp kinks make the centered differences
            // locally first order, so grid accuracy is ~1% here
            assert!(
                (grid - exact).abs() < 1e-2 * exact,
                "n={n}: grid {grid} vs separable {exact}"
            );
        }
    }
}
