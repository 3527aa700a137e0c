//! Weighted distribution functions, decreasing and star rearrangements and
//! the Pólya–Szegő comparison on the half-disk.

use crate::density::Density;
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::io::{BufRead, Write};

/// A function sampled on the polar node grid r_i = i R_D/P, θ_j = j π/M of
/// the half-disk of radius R_D. Values are stored row-major in i.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub radii: usize,
    pub angles: usize,
    pub r_d: f64,
    pub density: Density,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(radii: usize, angles: usize, r_d: f64, density: Density, values: Vec<f64>) -> Result<Self> {
        if density.n != 2 {
            return Err(Error::Precondition("grid functions require N = 2".into()));
        }
        if radii < 1 || angles < 1 {
            return Err(Error::Precondition("grid needs at least one cell per direction".into()));
        }
        if !(r_d > 0.0) {
            return Err(Error::Precondition(format!("domain radius must be > 0, got {r_d}")));
        }
        if values.len() != (radii + 1) * (angles + 1) {
            return Err(Error::Precondition(format!(
                "expected {} values, got {}",
                (radii + 1) * (angles + 1),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("values must be finite".into()));
        }
        Ok(GridFunction { radii, angles, r_d, density, values })
    }

    /// Samples u(r, θ) on the nodes.
    pub fn sample<F: Fn(f64, f64) -> f64>(
        radii: usize,
        angles: usize,
        r_d: f64,
        density: Density,
        f: F,
    ) -> Result<Self> {
        let dr = r_d / radii as f64;
        let dt = PI / angles as f64;
        let mut values = Vec::with_capacity((radii + 1) * (angles + 1));
        for i in 0..=radii {
            for j in 0..=angles {
                values.push(f(i as f64 * dr, j as f64 * dt));
            }
        }
        GridFunction::new(radii, angles, r_d, density, values)
    }

    pub fn dr(&self) -> f64 {
        self.r_d / self.radii as f64
    }

    pub fn dtheta(&self) -> f64 {
        PI / self.angles as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.angles + 1) + j]
    }

    /// μ-weight of the (i,j) cell: density at the cell center × r Δr Δθ.
    fn cell_weight(&self, i: usize, j: usize) -> f64 {
        let r = (i as f64 + 0.5) * self.dr();
        let t = (j as f64 + 0.5) * self.dtheta();
        self.density.weight_polar(r, t) * r * self.dr() * self.dtheta()
    }

    /// Node quadrature weights: every cell spreads its μ-weight equally
    /// onto its four corners, so node sums match the cell-center totals
    /// exactly and stay consistent with the rearrangement table.
    pub fn node_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.values.len()];
        let stride = self.angles + 1;
        for i in 0..self.radii {
            for j in 0..self.angles {
                let q = 0.25 * self.cell_weight(i, j);
                w[i * stride + j] += q;
                w[i * stride + j + 1] += q;
                w[(i + 1) * stride + j] += q;
                w[(i + 1) * stride + j + 1] += q;
            }
        }
        w
    }

    /// The two linear triangles of each cell, as (weight, corner values).
    /// The interpolant behind them is what the distribution table and the
    /// integrals discretize, so they stay mutually consistent.
    fn triangles(&self) -> impl Iterator<Item = (f64, [f64; 3])> + '_ {
        (0..self.radii).flat_map(move |i| {
            (0..self.angles).flat_map(move |j| {
                let w = 0.5 * self.cell_weight(i, j);
                let v00 = self.value(i, j);
                let v10 = self.value(i + 1, j);
                let v01 = self.value(i, j + 1);
                let v11 = self.value(i + 1, j + 1);
                [(w, [v00, v10, v01]), (w, [v10, v01, v11])]
            })
        })
    }

    /// μ-measure of the half-disk domain.
    pub fn domain_measure(&self) -> f64 {
        (0..self.radii)
            .flat_map(|i| (0..self.angles).map(move |j| self.cell_weight(i, j)))
            .sum()
    }

    /// ∫ Φ(|u|) dμ over the piecewise-linear interpolant, edge-midpoint
    /// rule per triangle (exact for quadratic Φ).
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        self.triangles()
            .map(|(w, [a, b, c])| {
                w / 3.0
                    * (phi((0.5 * (a + b)).abs())
                        + phi((0.5 * (b + c)).abs())
                        + phi((0.5 * (a + c)).abs()))
            })
            .sum()
    }

    /// Whether the values depend on the radius only.
    pub fn is_radial(&self, tol: f64) -> bool {
        (0..=self.radii)
            .all(|i| (0..=self.angles).all(|j| (self.value(i, j) - self.value(i, 0)).abs() <= tol))
    }

    /// Writes the `P,M,R_D,k,c` header and `i,j,u` rows.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{:.17e},{:.17e},{:.17e}",
            self.radii, self.angles, self.r_d, self.density.k, self.density.c
        )?;
        for i in 0..=self.radii {
            for j in 0..=self.angles {
                writeln!(w, "{i},{j},{:.17e}", self.value(i, j))?;
            }
        }
        Ok(())
    }

    /// Reads the format of [`GridFunction::to_csv`]; the density amplitude
    /// is taken as 1.
    pub fn from_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("empty grid file".into()))?
            .map_err(|e| Error::Input(e.to_string()))?;
        let head: Vec<&str> = header.trim().split(',').collect();
        if head.len() != 5 {
            return Err(Error::Input("header must be P,M,R_D,k,c".into()));
        }
        let radii: usize = head[0].trim().parse().map_err(|e| Error::Input(format!("P: {e}")))?;
        let angles: usize = head[1].trim().parse().map_err(|e| Error::Input(format!("M: {e}")))?;
        let r_d: f64 = head[2].trim().parse().map_err(|e| Error::Input(format!("R_D: {e}")))?;
        let k: f64 = head[3].trim().parse().map_err(|e| Error::Input(format!("k: {e}")))?;
        let c: f64 = head[4].trim().parse().map_err(|e| Error::Input(format!("c: {e}")))?;
        let density = Density::half_space(k, c, 2)?;
        let mut values = vec![f64::NAN; (radii + 1) * (angles + 1)];
        for line in lines {
            let line = line.map_err(|e| Error::Input(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Input(format!("expected i,j,u row, got `{line}`")));
            }
            let i: usize = cols[0].trim().parse().map_err(|e| Error::Input(format!("i: {e}")))?;
            let j: usize = cols[1].trim().parse().map_err(|e| Error::Input(format!("j: {e}")))?;
            if i > radii || j > angles {
                return Err(Error::Input(format!("index ({i},{j}) out of range")));
            }
            values[i * (angles + 1) + j] =
                cols[2].trim().parse().map_err(|e| Error::Input(format!("u: {e}")))?;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Input("grid file is missing nodes".into()));
        }
        GridFunction::new(radii, angles, r_d, density, values)
    }
}

/// Fraction of a linear triangle with sorted values a ≤ b ≤ c lying
/// strictly above t.
fn frac_above(t: f64, a: f64, b: f64, c: f64) -> f64 {
    if t < a {
        1.0
    } else if t >= c {
        0.0
    } else if t < b {
        1.0 - (t - a) * (t - a) / ((b - a) * (c - a))
    } else {
        (c - t) * (c - t) / ((c - b) * (c - a))
    }
}

fn sort3(mut v: [f64; 3]) -> [f64; 3] {
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// The distribution function m_μ(t) = μ({|u| > t}) of the piecewise-linear
/// interpolant of u.
pub fn distribution(u: &GridFunction, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("threshold must be >= 0, got {t}")));
    }
    Ok(u
        .triangles()
        .map(|(w, v)| {
            let [a, b, c] = sort3(v);
            w * (frac_above(t, a, b, c) + frac_above(t, -c, -b, -a))
        })
        .sum())
}

/// Distribution table with its inverse u*. m_μ is continuous and piecewise
/// linear between thresholds, except at plateau values of u where the true
/// jump of m_μ is recorded and reproduced.
#[derive(Debug, Clone)]
pub struct RearrangementTable {
    /// increasing thresholds and the (nonincreasing) distribution values
    pub thresholds: Vec<f64>,
    pub m_values: Vec<f64>,
    /// left limits m_μ(t⁻): equal to m_values except at plateau values
    m_left: Vec<f64>,
    total: f64,
}

impl RearrangementTable {
    /// m_μ(t), right-continuous, interpolated between thresholds.
    pub fn m_mu(&self, t: f64) -> f64 {
        if t < 0.0 || self.thresholds.is_empty() {
            return self.total;
        }
        let idx = self.thresholds.partition_point(|&v| v <= t);
        if idx == 0 {
            return self.total;
        }
        if idx >= self.thresholds.len() {
            return *self.m_values.last().unwrap();
        }
        let (t0, t1) = (self.thresholds[idx - 1], self.thresholds[idx]);
        let (m0, m1) = (self.m_values[idx - 1], self.m_left[idx]);
        if t1 <= t0 {
            m0
        } else {
            m0 + (m1 - m0) * (t - t0) / (t1 - t0)
        }
    }

    /// u*(s) = inf{t ≥ 0 : m_μ(t) ≤ s}.
    pub fn u_star(&self, s: f64) -> f64 {
        if self.thresholds.is_empty() {
            return 0.0;
        }
        if s >= self.m_values[0] {
            return self.thresholds[0];
        }
        // first index whose (right-continuous) distribution drops to <= s
        let idx = self.m_values.partition_point(|&m| m > s);
        if idx >= self.thresholds.len() {
            return self.max_value();
        }
        let t1 = self.thresholds[idx];
        if s <= self.m_left[idx] {
            // s falls inside the jump at a plateau value
            return t1;
        }
        let (t0, m0) = (self.thresholds[idx - 1], self.m_values[idx - 1]);
        let m1 = self.m_left[idx];
        if m0 <= m1 {
            t1
        } else {
            t0 + (t1 - t0) * (m0 - s) / (m0 - m1)
        }
    }

    pub fn max_value(&self) -> f64 {
        self.thresholds.last().copied().unwrap_or(0.0)
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }

    /// ∫_0^{μ(D)} Φ(u*(s)) ds by the trapezoid rule between thresholds,
    /// with plateau jumps handled exactly.
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        let l = self.thresholds.len();
        if l == 0 {
            return 0.0;
        }
        let mut acc = phi(self.thresholds[0]) * (self.total - self.m_values[0]).max(0.0);
        for i in 1..l {
            let span = (self.m_values[i - 1] - self.m_left[i]).max(0.0);
            acc += 0.5 * span * (phi(self.thresholds[i - 1]) + phi(self.thresholds[i]));
            let jump = (self.m_left[i] - self.m_values[i]).max(0.0);
            acc += jump * phi(self.thresholds[i]);
        }
        acc
    }

    /// Writes `t,m_mu,s,u_star` rows; the s column spans [0, μ(D)] on as
    /// many uniform points as there are thresholds.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,m_mu,s,u_star")?;
        let l = self.thresholds.len();
        for (i, (t, m)) in self.thresholds.iter().zip(&self.m_values).enumerate() {
            let s = self.total * i as f64 / (l - 1).max(1) as f64;
            writeln!(w, "{t:.17e},{m:.17e},{s:.17e},{:.17e}", self.u_star(s))?;
        }
        Ok(())
    }
}

/// Builds the decreasing rearrangement of |u|: uniform thresholds on
/// [0, max|u|] (at least 256, scaled with the grid) plus all distinct
/// sampled values when there are fewer than 4096 of them, with the
/// distribution of the piecewise-linear interpolant evaluated at each.
pub fn decreasing_rearrangement(u: &GridFunction) -> RearrangementTable {
    let umax = u.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let total = u.domain_measure();
    let levels = 256.max(4 * (u.radii + u.angles));
    let mut thresholds: Vec<f64> = (0..=levels).map(|l| umax * l as f64 / levels as f64).collect();
    let mut distinct: Vec<f64> = u.values.iter().map(|v| v.abs()).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < 4096 {
        thresholds.extend(distinct);
    }
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();
    if umax == 0.0 {
        thresholds = vec![0.0];
    }
    let mut m_values = vec![0.0; thresholds.len()];
    // per-threshold plateau mass: triangles on which |u| is constant make
    // m_mu jump there
    let mut plateau = vec![0.0; thresholds.len()];
    // the t < min(copy) region of every triangle copy contributes its full
    // weight; accumulate those via a difference array
    let mut below = vec![0.0; thresholds.len() + 1];
    for (w, v) in u.triangles() {
        let [a, b, c] = sort3(v);
        for [a, b, c] in [[a, b, c], [-c, -b, -a]] {
            if c <= 0.0 {
                continue;
            }
            if a == c {
                // plateau at value a (> 0): full weight below, jump at a
                let ia = thresholds.partition_point(|&t| t < a);
                below[0] += w;
                below[ia] -= w;
                if ia < thresholds.len() && thresholds[ia] == a {
                    plateau[ia] += w;
                }
                continue;
            }
            let ia = thresholds.partition_point(|&t| t < a);
            let ic = thresholds.partition_point(|&t| t < c);
            below[0] += w;
            below[ia] -= w;
            for l in ia..ic {
                m_values[l] += w * frac_above(thresholds[l], a, b, c);
            }
        }
    }
    let mut acc = 0.0;
    for (l, m) in m_values.iter_mut().enumerate() {
        acc += below[l];
        *m += acc;
    }
    // guard the inversion against rounding-level non-monotonicity; the top
    // threshold is max|u|, where the distribution vanishes identically
    *m_values.last_mut().unwrap() = 0.0;
    for l in 1..m_values.len() {
        m_values[l] = m_values[l].min(m_values[l - 1]);
    }
    let mut m_left: Vec<f64> = m_values.iter().zip(&plateau).map(|(m, p)| m + p).collect();
    for l in 1..m_left.len() {
        m_left[l] = m_left[l].min(m_values[l - 1]);
    }
    RearrangementTable { thresholds, m_values, m_left, total }
}

/// Star rearrangement u★(x) = u*(a C_μ ψ(|x|)) on the half-ball M★ of the
/// same μ-measure as the domain, sampled on a grid of the same shape.
pub fn star_rearrangement(u: &GridFunction) -> Result<GridFunction> {
    let table = decreasing_rearrangement(u);
    let d = &u.density;
    let radii = 4 * u.radii;
    let r_star = d.star_radius(table.total_measure())?;
    let ac = d.a * d.angular_constant();
    let dr = r_star / radii as f64;
    let mut radial = Vec::with_capacity(radii + 1);
    for i in 0..=radii {
        let s = ac * d.psi(i as f64 * dr)?;
        radial.push(table.u_star(s));
    }
    let mut values = Vec::with_capacity((radii + 1) * (u.angles + 1));
    for i in 0..=radii {
        for _ in 0..=u.angles {
            values.push(radial[i]);
        }
    }
    GridFunction::new(radii, u.angles, r_star, *d, values)
}

/// ∫ |∇u|^q dμ with the polar gradient (∂_r u, r^{-1} ∂_θ u) by centered
/// differences; at r = 0 the radial part is one-sided and the angular part
/// is dropped.
pub fn gradient_qnorm(u: &GridFunction, q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::Domain(format!("q must lie in (0, 2], got {q}")));
    }
    let (p, m) = (u.radii, u.angles);
    let (dr, dt) = (u.dr(), u.dtheta());
    let mut acc = 0.0;
    for i in 0..=p {
        let r = i as f64 * dr;
        let ci = if i == 0 || i == p { 0.5 } else { 1.0 };
        for j in 0..=m {
            let cj = if j == 0 || j == m { 0.5 } else { 1.0 };
            let du_dr = if i == 0 {
                (u.value(1, j) - u.value(0, j)) / dr
            } else if i == p {
                (u.value(p, j) - u.value(p - 1, j)) / dr
            } else {
                (u.value(i + 1, j) - u.value(i - 1, j)) / (2.0 * dr)
            };
            let du_dt = if i == 0 {
                0.0
            } else {
                let d = if j == 0 {
                    u.value(i, 1) - u.value(i, 0)
                } else if j == m {
                    u.value(i, m) - u.value(i, m - 1)
                } else {
                    (u.value(i, j + 1) - u.value(i, j - 1)) / 2.0
                };
                d / (dt * r)
            };
            let grad = (du_dr * du_dr + du_dt * du_dt).sqrt();
            let t = j as f64 * dt;
            acc += ci * cj * grad.powf(q) * u.density.weight_polar(r, t) * r * dr * dt;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(k: f64, c: f64) -> Density {
        Density::half_space(k, c, 2).unwrap()
    }

    fn abs_r(radii: usize, angles: usize, den: Density) -> GridFunction {
        GridFunction::sample(radii, angles, 1.0, den, |r, _| r).unwrap()
    }

    #[test]
    fn distribution_constant_and_radial() {
        let den = d(0.0, 0.0);
        let u = GridFunction::sample(128, 128, 1.0, den, |_, _| 3.0).unwrap();
        assert!((distribution(&u, 2.0).unwrap() - PI / 2.0).abs() < 1e-3);
        assert_eq!(distribution(&u, 3.0).unwrap(), 0.0);
        assert!(distribution(&u, -0.5).is_err());

        let u = abs_r(256, 128, den);
        for t in [0.2, 0.5, 0.8] {
            let exact = PI * (1.0 - t * t) / 2.0;
            let got = distribution(&u, t).unwrap();
            assert!((got - exact).abs() < 2e-2, "t={t}: {got} vs {exact}");
        }

        let u = abs_r(256, 128, d(1.0, 0.0));
        for t in [0.3, 0.6] {
            let exact = 2.0 / 3.0 * (1.0 - t * t * t);
            let got = distribution(&u, t).unwrap();
            assert!((got - exact).abs() < 2e-2, "k=1 t={t}: {got} vs {exact}");
        }
    }

    #[test]
    fn distribution_nonincreasing() {
        let den = d(0.5, 0.5);
        let u = GridFunction::sample(64, 64, 1.0, den, |r, t| (3.0 * r).sin() + t.cos()).unwrap();
        let mut prev = f64::INFINITY;
        for l in 0..50 {
            let m = distribution(&u, l as f64 * 0.05).unwrap();
            assert!(m <= prev + 1e-15);
            prev = m;
        }
    }

    #[test]
    fn rearrangement_of_constant() {
        let den = d(0.0, 0.0);
        let u = GridFunction::sample(64, 64, 1.0, den, |_, _| 2.5).unwrap();
        let t = decreasing_rearrangement(&u);
        assert_eq!(t.max_value(), 2.5);
        let mu = t.total_measure();
        for s in [0.0, 0.3 * mu, 0.999 * mu] {
            assert_eq!(t.u_star(s), 2.5);
        }
        assert_eq!(t.u_star(1.001 * mu), 0.0);
    }

    #[test]
    fn rearrangement_of_radius_inverts_distribution() {
        let den = d(0.0, 0.0);
        let u = abs_r(512, 64, den);
        let t = decreasing_rearrangement(&u);
        for s in [0.1, 0.5, 1.0, 1.4] {
            let exact = (1.0 - 2.0 * s / PI).sqrt();
            let got = t.u_star(s);
            assert!((got - exact).abs() < 5e-3, "s={s}: {got} vs {exact}");
        }
        // u*(0) = ess-sup
        assert!((t.u_star(0.0) - 1.0).abs() < 3e-3);
    }

    #[test]
    fn annulus_sector_two_step_table() {
        let den = d(0.0, 0.0);
        let u = GridFunction::sample(512, 256, 1.0, den, |r, t| {
            if r > 0.3 && r < 0.7 && t > PI / 4.0 && t < PI / 2.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let table = decreasing_rearrangement(&u);
        let sector = (0.49 - 0.09) / 2.0 * (PI / 4.0);
        assert!((table.m_mu(0.5) - sector).abs() < 5e-3, "{} vs {sector}", table.m_mu(0.5));
        assert_eq!(table.m_mu(1.0), 0.0);
        assert!(table.u_star(0.5 * sector) >= 0.25);
        assert_eq!(table.u_star(1.5 * sector), 0.0);
    }

    #[test]
    fn equimeasurability_of_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (k, c) in [(0.0, 0.0), (1.0, 0.5), (2.0, 1.0)] {
            let den = d(k, c);
            for _ in 0..10 {
                let (a1, a2, b) = (
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(1.0..3.0),
                );
                let u = GridFunction::sample(192, 96, 1.0, den, |r, t| {
                    a1 * (b * r).cos() + a2 * (1.0 - r * r) * t.sin()
                })
                .unwrap();
                let table = decreasing_rearrangement(&u);
                for phi in [|x: f64| x, |x: f64| x * x, |x: f64| x.powf(1.5)] {
                    let lhs = u.integrate(phi);
                    let rhs = table.integrate(phi);
                    assert!(
                        (lhs - rhs).abs() <= 1e-3 * lhs.abs().max(1e-9),
                        "k={k} c={c}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn star_of_radius_is_cap_profile() {
        let den = d(0.0, 0.0);
        let u = abs_r(512, 64, den);
        let s = star_rearrangement(&u).unwrap();
        assert!((s.r_d - 1.0).abs() < 1e-3);
        assert!(s.is_radial(0.0));
        let grid = s.dr();
        for i in (0..=512).step_by(32) {
            let r = i as f64 * s.dr();
            let exact = (1.0 - (r * r).min(1.0)).sqrt();
            assert!(
                (s.value(i, 0) - exact).abs() <= 2.0 * grid.max(1.0 / 512.0) + 2e-3,
                "r={r}: {} vs {exact}",
                s.value(i, 0)
            );
        }
    }

    #[test]
    fn star_is_idempotent_on_radial_decreasing() {
        let den = d(1.0, 0.5);
        let u = GridFunction::sample(256, 64, 1.0, den, |r, _| 1.0 - r * r).unwrap();
        let s = star_rearrangement(&u).unwrap();
        assert!((s.r_d - 1.0).abs() < 2e-3);
        for i in (0..=256).step_by(16) {
            let r = i as f64 * s.dr();
            assert!(
                (s.value(i, 0) - (1.0 - r * r)).abs() < 2e-2,
                "r={r}: {}",
                s.value(i, 0)
            );
        }
    }

    #[test]
    fn star_preserves_measure_of_level_sets() {
        let den = d(2.0, 0.5);
        let u = GridFunction::sample(128, 96, 1.0, den, |r, t| (2.0 * r).cos().abs() + 0.3 * t.sin())
            .unwrap();
        let s = star_rearrangement(&u).unwrap();
        for t in [0.3, 0.7, 1.0] {
            let m0 = distribution(&u, t).unwrap();
            let m1 = distribution(&s, t).unwrap();
            assert!((m0 - m1).abs() <= 2e-2 * m0.max(0.05), "t={t}: {m0} vs {m1}");
        }
    }

    #[test]
    fn gradient_qnorm_oracles() {
        let den = d(0.0, 0.0);
        let u = abs_r(256, 256, den);
        for q in [1.0, 2.0] {
            let v = gradient_qnorm(&u, q).unwrap();
            assert!((v - PI / 2.0).abs() < 2e-2, "q={q}: {v}");
        }
        let u = GridFunction::sample(256, 256, 1.0, den, |r, _| 1.0 - r * r).unwrap();
        let v = gradient_qnorm(&u, 2.0).unwrap();
        assert!((v - PI).abs() < 5e-2, "{v}");
        assert!(gradient_qnorm(&u, 0.0).is_err());
        assert!(gradient_qnorm(&u, 2.5).is_err());
    }

    fn random_vanishing(rng: &mut ChaCha8Rng, den: Density) -> GridFunction {
        let (a1, a2, b1, b2) = (
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(1.0..4.0),
            rng.gen_range(1.0..3.0),
        );
        GridFunction::sample(128, 96, 1.0, den, move |r, t| {
            // cutoff vanishing for r >= 0.85
            let x = (0.85 - r) / 0.85;
            let chi = if x > 0.0 { (x * x * (3.0 - 2.0 * x)).min(1.0) } else { 0.0 };
            chi * (a1 * (b1 * r).cos() + a2 * (b2 * r * t.sin()).cos())
        })
        .unwrap()
    }

    #[test]
    fn polya_szego_and_equimeasurability_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut max_poincare: f64 = 0.0;
        for (k, c) in [(0.0, 0.0), (1.0, 0.5)] {
            let den = d(k, c);
            for _ in 0..25 {
                let u = random_vanishing(&mut rng, den);
                let s = star_rearrangement(&u).unwrap();
                let l2 = u.integrate(|x| x * x);
                let l2s = s.integrate(|x| x * x);
                assert!(
                    (l2 - l2s).abs() <= 1e-3 * l2.max(1e-6),
                    "k={k}: equimeasurability {l2} vs {l2s}"
                );
                let e = gradient_qnorm(&u, 2.0).unwrap();
                let es = gradient_qnorm(&s, 2.0).unwrap();
                assert!(e >= es - 1e-3 * e.max(1e-9), "k={k}: dirichlet {e} vs {es}");
                if e > 1e-12 {
                    max_poincare = max_poincare.max(l2 / e);
                }
            }
        }
        assert!(max_poincare.is_finite() && max_poincare > 0.0);
    }

    #[test]
    fn grid_csv_roundtrip() {
        let den = d(1.5, 0.5);
        let u = GridFunction::sample(10, 8, 2.0, den, |r, t| r * t.cos()).unwrap();
        let mut buf = Vec::new();
        u.to_csv(&mut buf).unwrap();
        let back = GridFunction::from_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(back.radii, 10);
        assert_eq!(back.angles, 8);
        assert!((back.r_d - 2.0).abs() < 1e-15);
        assert!((back.density.k - 1.5).abs() < 1e-15);
        for (a, b) in u.values.iter().zip(&back.values) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn table_csv_has_monotone_columns() {
        let den = d(0.0, 0.0);
        let u = abs_r(64, 32, den);
        let table = decreasing_rearrangement(&u);
        let mut buf = Vec::new();
        table.to_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut prev_t = -1.0;
        let mut prev_m = f64::INFINITY;
        let mut prev_us = f64::INFINITY;
        for line in text.lines().skip(1) {
            let c: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            assert!(c[0] > prev_t);
            assert!(c[1] <= prev_m);
            assert!(c[3] <= prev_us);
            prev_t = c[0];
            prev_m = c[1];
            prev_us = c[3];
        }
    }
}
