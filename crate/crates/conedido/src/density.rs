//! The weight family dμ = a·x_N^k·exp(c|x|²) dx on the half-space (or, for
//! k = 0, on the whole space) and its derived closed forms: the radial
//! cumulative ψ, the angular constant C_μ, half-ball measure and perimeter,
//! and the isoperimetric profile I_μ.

use crate::error::{Error, Result};
use crate::quad;
use statrs::function::{beta::beta, gamma::gamma};

/// Where the density lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// The open half-space { x_N > 0 }.
    HalfSpace,
    /// All of R^N; only the pure Gaussian-type weight (k = 0) is admitted.
    FullSpace,
}

/// A member of the weight family a·x_N^k·exp(c|x|²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub a: f64,
    pub k: f64,
    pub c: f64,
    pub n: usize,
    pub domain: Domain,
}

/// Closed-form constants attached to a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityConstants {
    /// Angular constant C_μ (for N = 2 this equals a_k).
    pub c_mu: f64,
    /// The 2-D angular constant a_k = ∫_0^π sin^k θ dθ = B((k+1)/2, 1/2).
    pub a_k: f64,
    /// Lebesgue volume of the unit ball in dimension N-1.
    pub omega: f64,
}

/// Volume of the unit ball in R^n (n = 0 gives 1).
pub fn unit_ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
}

impl Density {
    pub fn new(a: f64, k: f64, c: f64, n: usize, domain: Domain) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Precondition(format!("amplitude a must be positive, got {a}")));
        }
        if !(k >= 0.0) {
            return Err(Error::Precondition(format!("exponent k must be nonnegative, got {k}")));
        }
        if !(c >= 0.0) {
            return Err(Error::Precondition(format!("rate c must be nonnegative, got {c}")));
        }
        if n < 1 {
            return Err(Error::Precondition("dimension N must be at least 1".into()));
        }
        if domain == Domain::FullSpace && k != 0.0 {
            return Err(Error::Precondition(
                "full-space densities require k = 0".into(),
            ));
        }
        Ok(Density { a, k, c, n, domain })
    }

    /// Half-space density in R^N with amplitude 1.
    pub fn half_space(k: f64, c: f64, n: usize) -> Result<Self> {
        Density::new(1.0, k, c, n, Domain::HalfSpace)
    }

    /// Pointwise weight a·x_N^k·exp(c|x|²). Returns 0 outside the domain.
    pub fn weight(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let xn = x[self.n - 1];
        if self.domain == Domain::HalfSpace && xn <= 0.0 {
            return 0.0;
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let pow = if self.k == 0.0 { 1.0 } else { xn.powf(self.k) };
        self.a * pow * (self.c * r2).exp()
    }

    /// Weight in 2-D polar coordinates (r, θ): a·(r sin θ)^k·e^{cr²}.
    pub fn weight_polar(&self, r: f64, theta: f64) -> f64 {
        let y = r * theta.sin();
        let pow = if self.k == 0.0 { 1.0 } else { y.max(0.0).powf(self.k) };
        self.a * pow * (self.c * r * r).exp()
    }

    /// ψ(r) = ∫_0^r e^{ct²} t^{N+k-1} dt.
    pub fn psi(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::Domain(format!("psi requires r >= 0, got {r}")));
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        let p = self.n as f64 + self.k - 1.0;
        let c = self.c;
        // purely relative tolerance: ψ(r) underflows any fixed absolute
        // tolerance for small r, and the integrand is scale invariant
        quad::integrate(|t| (c * t * t).exp() * t.powf(p), 0.0, r, 0.0, 1e-12)
    }

    /// Derivative ψ'(r) = e^{cr²} r^{N+k-1}.
    pub fn psi_prime(&self, r: f64) -> f64 {
        let p = self.n as f64 + self.k - 1.0;
        (self.c * r * r).exp() * r.powf(p)
    }

    /// Inverse of ψ: returns r with ψ(r) = m.
    pub fn psi_inv(&self, m: f64) -> Result<f64> {
        if m < 0.0 {
            return Err(Error::Domain(format!("psi_inv requires m >= 0, got {m}")));
        }
        if m == 0.0 {
            return Ok(0.0);
        }
        // bracket the root; psi grows at least like r^{N+k}/(N+k)
        let mut hi = 1.0;
        while self.psi(hi)? < m {
            hi *= 2.0;
            if hi > 1e8 {
                return Err(Error::Numerical("psi_inv bracket overflow".into()));
            }
        }
        let g = |r: f64| self.psi(r).unwrap_or(f64::NAN) - m;
        let dg = |r: f64| self.psi_prime(r);
        // residual tolerance relative to m so small radii stay accurate
        quad::increasing_root(g, dg, 0.0, hi, 1e-6, 1e-12 * m)
    }

    /// The constants (C_μ, a_k, ω_{N-1}) of the density.
    pub fn constants(&self) -> DensityConstants {
        let a_k = beta((self.k + 1.0) / 2.0, 0.5);
        let omega = unit_ball_volume(self.n.saturating_sub(1));
        let c_mu = self.angular_constant();
        DensityConstants { c_mu, a_k, omega }
    }

    /// Angular constant: C_μ = ½(N-1)·ω_{N-1}·B((k+1)/2, (N-1)/2) on the
    /// half-space, the full sphere measure N·ω_N on the whole space, and 1
    /// for N = 1.
    pub fn angular_constant(&self) -> f64 {
        match self.domain {
            Domain::FullSpace => self.n as f64 * unit_ball_volume(self.n),
            Domain::HalfSpace => {
                if self.n == 1 {
                    1.0
                } else {
                    let nm1 = (self.n - 1) as f64;
                    0.5 * nm1 * unit_ball_volume(self.n - 1) * beta((self.k + 1.0) / 2.0, nm1 / 2.0)
                }
            }
        }
    }

    /// μ(B_R ∩ domain) = a·C_μ·ψ(R).
    pub fn half_ball_measure(&self, radius: f64) -> Result<f64> {
        if radius < 0.0 {
            return Err(Error::Domain(format!("radius must be >= 0, got {radius}")));
        }
        Ok(self.a * self.angular_constant() * self.psi(radius)?)
    }

    /// P_μ(B_R ∩ domain) = a·C_μ·e^{cR²}·R^{N+k-1}.
    pub fn half_ball_perimeter(&self, radius: f64) -> Result<f64> {
        if radius <= 0.0 {
            return Err(Error::Domain(format!("radius must be > 0, got {radius}")));
        }
        Ok(self.a * self.angular_constant() * self.psi_prime(radius))
    }

    /// Radius r★ of the half-ball of μ-measure `tau`.
    pub fn star_radius(&self, tau: f64) -> Result<f64> {
        if tau < 0.0 {
            return Err(Error::Domain(format!("measure must be >= 0, got {tau}")));
        }
        self.psi_inv(tau / (self.a * self.angular_constant()))
    }

    /// Isoperimetric profile I_μ(τ): the perimeter of the half-ball of
    /// measure τ.
    pub fn isoperimetric_profile(&self, tau: f64) -> Result<f64> {
        if tau < 0.0 {
            return Err(Error::Domain(format!("measure must be >= 0, got {tau}")));
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let r = self.star_radius(tau)?;
        Ok(self.a * self.angular_constant() * self.psi_prime(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn d(k: f64, c: f64, n: usize) -> Density {
        Density::half_space(k, c, n).unwrap()
    }

    #[test]
    fn psi_simple_cases() {
        assert!((d(0.0, 0.0, 2).psi(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((d(1.0, 0.0, 2).psi(2.0).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        // analytic antiderivative e^{t^2}/2
        let v = d(0.0, 1.0, 2).psi(1.0).unwrap();
        assert!((v - (1f64.exp() - 1.0) / 2.0).abs() < 1e-12);
        assert_eq!(d(2.0, 1.0, 3).psi(0.0).unwrap(), 0.0);
        assert!(d(0.0, 0.0, 2).psi(-1.0).is_err());
    }

    #[test]
    fn psi_inv_roundtrip() {
        assert!((d(0.0, 0.0, 2).psi_inv(0.5).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(d(1.0, 0.5, 3).psi_inv(0.0).unwrap(), 0.0);
        let dd = d(2.0, 0.5, 3);
        let m = dd.psi(1.7).unwrap();
        assert!((dd.psi_inv(m).unwrap() - 1.7).abs() < 1.7e-9);
        assert!(dd.psi_inv(-0.1).is_err());
    }

    #[test]
    fn psi_monotone_roundtrip_grid() {
        let dd = d(1.5, 0.7, 3);
        let mut prev = 0.0;
        for i in 1..=40 {
            let r = 1e-3 * (10.0f64 / 1e-3).powf(i as f64 / 40.0);
            let p = dd.psi(r).unwrap();
            assert!(p > prev);
            prev = p;
            let back = dd.psi_inv(p).unwrap();
            assert!((back - r).abs() <= 1e-9 * r, "r={r} back={back}");
        }
    }

    #[test]
    fn angular_constants() {
        assert!((d(0.0, 0.0, 2).angular_constant() - PI).abs() < 1e-12);
        assert!((d(1.0, 0.0, 2).angular_constant() - 2.0).abs() < 1e-12);
        assert!((d(0.0, 0.0, 3).angular_constant() - 2.0 * PI).abs() < 1e-12);
        // full space: surface of the unit sphere
        let full = Density::new(1.0, 0.0, 0.0, 3, Domain::FullSpace).unwrap();
        assert!((full.angular_constant() - 4.0 * PI).abs() < 1e-12);
        // n=2 has C_mu = a_k
        let cst = d(1.3, 0.0, 2).constants();
        assert!((cst.c_mu - cst.a_k).abs() < 1e-12);
    }

    #[test]
    fn half_ball_quantities() {
        assert!((d(0.0, 0.0, 2).half_ball_measure(1.0).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((d(1.0, 0.0, 2).half_ball_measure(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((d(0.0, 0.0, 3).half_ball_measure(2.0).unwrap() - 16.0 * PI / 3.0).abs() < 1e-10);
        assert!((d(0.0, 0.0, 2).half_ball_perimeter(1.0).unwrap() - PI).abs() < 1e-12);
        assert!((d(1.0, 0.0, 2).half_ball_perimeter(1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((d(0.0, 1.0, 2).half_ball_perimeter(1.0).unwrap() - PI * 1f64.exp()).abs() < 1e-10);
        assert!(d(0.0, 0.0, 2).half_ball_perimeter(0.0).is_err());
    }

    #[test]
    fn profile_closed_form() {
        // k=0, c=0, N=2: I(tau) = sqrt(2 pi tau)
        let dd = d(0.0, 0.0, 2);
        for tau in [0.3, PI / 2.0, 4.0] {
            let v = dd.isoperimetric_profile(tau).unwrap();
            assert!((v - (2.0 * PI * tau).sqrt()).abs() < 1e-9, "tau={tau}");
        }
        assert_eq!(d(2.0, 1.0, 3).isoperimetric_profile(0.0).unwrap(), 0.0);
        assert!((dd.isoperimetric_profile(PI / 2.0).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn profile_consistency_grid() {
        for n in [2usize, 3] {
            for k in [0.0, 1.0, 2.5] {
                for c in [0.0, 0.5, 1.0] {
                    let dd = d(k, c, n);
                    for radius in [0.1, 0.5, 1.0, 2.0, 5.0] {
                        let m = dd.half_ball_measure(radius).unwrap();
                        let p = dd.half_ball_perimeter(radius).unwrap();
                        let i = dd.isoperimetric_profile(m).unwrap();
                        assert!(
                            (i - p).abs() <= 1e-8 * p,
                            "n={n} k={k} c={c} R={radius}: I={i} P={p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn amplitude_scales_linearly() {
        let base = d(1.0, 0.5, 3);
        let scaled = Density::new(2.5, 1.0, 0.5, 3, Domain::HalfSpace).unwrap();
        let m1 = base.half_ball_measure(1.3).unwrap();
        let m2 = scaled.half_ball_measure(1.3).unwrap();
        assert!((m2 - 2.5 * m1).abs() < 1e-12 * m2);
        let p1 = base.half_ball_perimeter(1.3).unwrap();
        let p2 = scaled.half_ball_perimeter(1.3).unwrap();
        assert!((p2 - 2.5 * p1).abs() < 1e-12 * p2);
    }

    #[test]
    fn slicing_identity() {
        // C_mu^{(N+1,k)}·psi^{(N+1,k)}(R) = a_k·C_mu^{(N,k+1)}·psi^{(N,k+1)}(R)
        for n in [2usize, 3, 4] {
            for k in [0.0, 1.0, 2.5] {
                for c in [0.0, 0.5, 1.0] {
                    let hi = d(k, c, n + 1);
                    let lo = d(k + 1.0, c, n);
                    let a_k = beta((k + 1.0) / 2.0, 0.5);
                    for radius in [0.5, 1.0, 2.0] {
                        let lhs = hi.angular_constant() * hi.psi(radius).unwrap();
                        let rhs = a_k * lo.angular_constant() * lo.psi(radius).unwrap();
                        assert!(
                            (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                            "n={n} k={k} c={c} R={radius}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_densities_rejected() {
        assert!(Density::new(0.0, 0.0, 0.0, 2, Domain::HalfSpace).is_err());
        assert!(Density::new(1.0, -1.0, 0.0, 2, Domain::HalfSpace).is_err());
        assert!(Density::new(1.0, 0.0, -0.5, 2, Domain::HalfSpace).is_err());
        assert!(Density::new(1.0, 1.0, 0.0, 2, Domain::FullSpace).is_err());
        assert!(Density::new(1.0, 0.0, 0.0, 0, Domain::HalfSpace).is_err());
    }
}
