//! Starlike boundary profiles ρ(θ) in the weighted half-plane and their
//! measure/perimeter quadrature.
//!
//! The θ-quadrature integrates the smooth factor piecewise-linearly against
//! exact panel moments of the angular weight sin^k θ, so constant profiles
//! reproduce the closed-form half-disk quantities to quadrature accuracy.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::quad;
use rand::Rng;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

/// The radial integrand pair of the starlike functional:
/// F'(r) = e^{cr²} r^{k+1} and G(r,p) = e^{cr²} r^k √(r²+p²), with partials.
pub(crate) mod fg {
    pub fn f_prime(k: f64, c: f64, r: f64) -> f64 {
        (c * r * r).exp() * r.powf(k + 1.0)
    }
    pub fn f_pprime(k: f64, c: f64, r: f64) -> f64 {
        f_prime(k, c, r) * (2.0 * c * r + (k + 1.0) / r)
    }
    pub fn g(k: f64, c: f64, r: f64, p: f64) -> f64 {
        (c * r * r).exp() * r.powf(k) * (r * r + p * p).sqrt()
    }
    pub fn g_r(k: f64, c: f64, r: f64, p: f64) -> f64 {
        let e = (c * r * r).exp() * r.powf(k);
        let s = (r * r + p * p).sqrt();
        e * ((2.0 * c * r + k / r) * s + r / s)
    }
    pub fn g_p(k: f64, c: f64, r: f64, p: f64) -> f64 {
        let e = (c * r * r).exp() * r.powf(k);
        e * p / (r * r + p * p).sqrt()
    }
    pub fn g_rr(k: f64, c: f64, r: f64, p: f64) -> f64 {
        let e = (c * r * r).exp() * r.powf(k);
        let s2 = r * r + p * p;
        let s = s2.sqrt();
        let lr = 2.0 * c * r + k / r;
        let lrr = 2.0 * c - k / (r * r);
        e * ((lr * lr + lrr) * s + 2.0 * lr * r / s + 1.0 / s - r * r / (s2 * s))
    }
    pub fn g_rp(k: f64, c: f64, r: f64, p: f64) -> f64 {
        let e = (c * r * r).exp() * r.powf(k);
        let s2 = r * r + p * p;
        let s = s2.sqrt();
        e * p * ((2.0 * c * r + k / r) / s - r / (s2 * s))
    }
    pub fn g_pp(k: f64, c: f64, r: f64, p: f64) -> f64 {
        let e = (c * r * r).exp() * r.powf(k);
        let s2 = r * r + p * p;
        e * r * r / (s2 * s2.sqrt())
    }
}

/// ∫_0^r e^{ct²} t^{k+1} dt via the everywhere-convergent series
/// r^{k+2} Σ_n (cr²)^n / (n!·(k+2+2n)); all terms positive, no cancellation.
pub(crate) fn f_series(k: f64, c: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let x = c * r * r;
    let mut term = 1.0; // x^n / n!
    let mut acc = term / (k + 2.0);
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= x / n;
        let add = term / (k + 2.0 + 2.0 * n);
        acc += add;
        if add < 1e-17 * acc || n > 500.0 {
            break;
        }
    }
    r.powf(k + 2.0) * acc
}

/// A sampled starlike boundary ρ(θ) at uniform nodes θ_j = jπ/M, j = 0..M.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub rho: Vec<f64>,
    pub density: Density,
}

impl RadialProfile {
    pub fn new(rho: Vec<f64>, density: Density) -> Result<Self> {
        if density.n != 2 {
            return Err(Error::Precondition("radial profiles require N = 2".into()));
        }
        if rho.len() < 3 {
            return Err(Error::Precondition("profile needs at least 3 nodes".into()));
        }
        if rho.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::Precondition("profile samples must be positive and finite".into()));
        }
        Ok(RadialProfile { rho, density })
    }

    /// Constant profile ρ ≡ radius on M panels.
    pub fn constant(radius: f64, panels: usize, density: Density) -> Result<Self> {
        RadialProfile::new(vec![radius; panels + 1], density)
    }

    pub fn panels(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn step(&self) -> f64 {
        PI / self.panels() as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    /// Whether ρ(θ) = ρ(π-θ) within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let m = self.panels();
        (0..=m / 2).all(|j| (self.rho[j] - self.rho[m - j]).abs() <= tol)
    }

    /// ρ'(θ_j) by centered differences, second-order one-sided at the ends.
    pub fn derivative(&self) -> Vec<f64> {
        derivative(&self.rho, self.step())
    }

    /// Writes the profile as `theta,rho` CSV.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "theta,rho")?;
        for (j, &r) in self.rho.iter().enumerate() {
            writeln!(w, "{:.17e},{:.17e}", self.theta(j), r)?;
        }
        Ok(())
    }

    /// Reads a `theta,rho` CSV written by [`RadialProfile::to_csv`].
    pub fn from_csv<R: BufRead>(r: R, density: Density) -> Result<Self> {
        let mut rho = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::Input(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("theta")) {
                continue;
            }
            let val = line
                .split(',')
                .nth(1)
                .ok_or_else(|| Error::Input(format!("line {}: expected theta,rho", i + 1)))?;
            rho.push(
                val.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Input(format!("line {}: {e}", i + 1)))?,
            );
        }
        RadialProfile::new(rho, density)
    }
}

pub(crate) fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let m = values.len() - 1;
    let mut d = vec![0.0; m + 1];
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[m] = (3.0 * values[m] - 4.0 * values[m - 1] + values[m - 2]) / (2.0 * h);
    for j in 1..m {
        d[j] = (values[j + 1] - values[j - 1]) / (2.0 * h);
    }
    d
}

/// Quadrature engine for profiles at fixed density and node count.
///
/// Holds the hat-function moments of sin^k θ.
pub struct ProfileQuadrature {
    pub density: Density,
    panels: usize,
    /// α_j = ∫ hat_j(θ) sin^k θ dθ; Σ α_j = a_k.
    alpha: Vec<f64>,
}

impl ProfileQuadrature {
    pub fn new(density: &Density, panels: usize) -> Result<Self> {
        if density.n != 2 {
            return Err(Error::Precondition("profile quadrature requires N = 2".into()));
        }
        if panels < 2 {
            return Err(Error::Precondition("need at least 2 panels".into()));
        }
        let k = density.k;
        let h = PI / panels as f64;
        let zk = |t: f64| t.sin().max(0.0).powf(k);
        let mut alpha = vec![0.0; panels + 1];
        for j in 0..panels {
            let (t0, t1) = (j as f64 * h, (j + 1) as f64 * h);
            // moments of the two hat functions supported on this panel
            let left = quad::integrate(|t| (t1 - t) / h * zk(t), t0, t1, 1e-14, 1e-12)?;
            let right = quad::integrate(|t| (t - t0) / h * zk(t), t0, t1, 1e-14, 1e-12)?;
            alpha[j] += left;
            alpha[j + 1] += right;
        }
        Ok(ProfileQuadrature {
            density: *density,
            panels,
            alpha,
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Angular node weights α_j (they sum to a_k).
    pub fn node_weights(&self) -> &[f64] {
        &self.alpha
    }

    /// F(r) = ∫_0^r e^{ct²} t^{k+1} dt by the (all-positive, hence stable)
    /// series r^{k+2} Σ_n (cr²)^n / (n!·(k+2+2n)).
    pub fn f_value(&self, r: f64) -> f64 {
        f_series(self.density.k, self.density.c, r)
    }

    pub fn f_prime(&self, r: f64) -> f64 {
        fg::f_prime(self.density.k, self.density.c, r)
    }

    /// μ-measure of the starlike set, a·Σ α_j F(ρ_j).
    pub fn measure(&self, rho: &[f64]) -> f64 {
        debug_assert_eq!(rho.len(), self.panels + 1);
        self.density.a
            * self
                .alpha
                .iter()
                .zip(rho)
                .map(|(a, &r)| a * self.f_value(r))
                .sum::<f64>()
    }

    /// μ-perimeter of the starlike set, a·Σ α_j G(ρ_j, ρ'_j).
    pub fn perimeter(&self, rho: &[f64]) -> f64 {
        debug_assert_eq!(rho.len(), self.panels + 1);
        let (k, c) = (self.density.k, self.density.c);
        let dr = derivative(rho, PI / self.panels as f64);
        self.density.a
            * self
                .alpha
                .iter()
                .zip(rho.iter().zip(&dr))
                .map(|(a, (&r, &p))| a * fg::g(k, c, r, p))
                .sum::<f64>()
    }
}

/// μ-measure of a sampled profile.
pub fn profile_measure(p: &RadialProfile) -> Result<f64> {
    Ok(ProfileQuadrature::new(&p.density, p.panels())?.measure(&p.rho))
}

/// μ-perimeter of a sampled profile.
pub fn profile_perimeter(p: &RadialProfile) -> Result<f64> {
    Ok(ProfileQuadrature::new(&p.density, p.panels())?.perimeter(&p.rho))
}

/// Random smooth starlike perturbation ρ = R(1 + Σ_{i<=8} ε_i sin(iθ)),
/// with Σ|ε_i| ≤ max_amplitude and ρ clamped to ≥ 0.05·R.
pub fn random_profile<R: Rng>(
    density: &Density,
    panels: usize,
    base_radius: f64,
    max_amplitude: f64,
    rng: &mut R,
) -> Result<RadialProfile> {
    let modes = 8;
    let mut eps: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let total: f64 = eps.iter().map(|e| e.abs()).sum();
    let amp = rng.gen_range(0.2..1.0) * max_amplitude;
    if total > 0.0 {
        for e in &mut eps {
            *e *= amp / total;
        }
    }
    let h = PI / panels as f64;
    let rho: Vec<f64> = (0..=panels)
        .map(|j| {
            let theta = j as f64 * h;
            let mut v = 1.0;
            for (i, e) in eps.iter().enumerate() {
                v += e * ((i + 1) as f64 * theta).sin();
            }
            (base_radius * v).max(0.05 * base_radius)
        })
        .collect();
    RadialProfile::new(rho, *density)
}
