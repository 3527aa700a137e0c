//! Degenerate elliptic problems on the half-disk: the explicit symmetrized
//! solution, a radial ODE solver, a polar finite-element solver and the
//! Talenti-type comparison verdicts.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::linalg::{cg_jacobi, CsrMatrix};
use crate::quad;
use crate::rearrange::{gradient_qnorm, star_rearrangement, GridFunction};

/// A radial table on the uniform grid r_i = i r_max / (len-1).
#[derive(Debug, Clone)]
pub struct RadialFunction {
    pub r_max: f64,
    pub values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(r_max: f64, values: Vec<f64>) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::Precondition(format!("radius must be > 0, got {r_max}")));
        }
        if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("radial table needs >= 2 finite values".into()));
        }
        Ok(RadialFunction { r_max, values })
    }

    pub fn sample<F: Fn(f64) -> f64>(panels: usize, r_max: f64, f: F) -> Result<Self> {
        let values = (0..=panels)
            .map(|i| f(i as f64 * r_max / panels as f64))
            .collect();
        RadialFunction::new(r_max, values)
    }

    pub fn panels(&self) -> usize {
        self.values.len() - 1
    }

    pub fn radius(&self, i: usize) -> f64 {
        i as f64 * self.r_max / self.panels() as f64
    }

    /// Linear interpolation, clamped to the table range.
    pub fn value(&self, r: f64) -> f64 {
        let x = (r / self.r_max * self.panels() as f64).clamp(0.0, self.panels() as f64);
        let i = (x.floor() as usize).min(self.panels() - 1);
        let s = x - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }

    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

/// Solves −(e^{cr²} r^{N+k−1} w′)′ = e^{cr²} r^{N+k−1} f with w(R_D) = 0
/// and the natural condition at r = 0, by two cumulative quadratures:
/// w(r) = ∫_r^{R} ρ^{1−N−k} e^{−cρ²} (∫_0^ρ f σ^{N+k−1} e^{cσ²} dσ) dρ.
pub fn solve_radial(d: &Density, f: &RadialFunction, r_d: f64) -> Result<RadialFunction> {
    if !(r_d > 0.0) {
        return Err(Error::Domain(format!("radius must be > 0, got {r_d}")));
    }
    let p = d.n as f64 + d.k - 1.0;
    let c = d.c;
    let n_panels = f.panels().max(64);
    let grid: Vec<f64> = (0..=n_panels).map(|i| i as f64 * r_d / n_panels as f64).collect();
    // inner cumulative: I(r_i) = ∫_0^{r_i} f σ^p e^{cσ²} dσ
    let src = |s: f64| f.value(s) * s.powf(p) * (c * s * s).exp();
    let inner_vals = quad::cumulative(src, 0.0, &grid, 1e-12)?;
    let h = r_d / n_panels as f64;
    // I(ρ) extended off-grid from the nearest node below, so the outer
    // integrand carries no interpolation error
    let inner_at = |rho: f64| -> f64 {
        let i = ((rho / h).floor() as usize).min(n_panels);
        inner_vals[i] + quad::integrate(src, grid[i], rho, 0.0, 1e-12).unwrap_or(f64::NAN)
    };
    // outer cumulative of g(ρ) = I(ρ) ρ^{-p} e^{-cρ²}; g → 0 as ρ → 0
    let outer = quad::cumulative(
        |rho| {
            if rho <= 0.0 {
                0.0
            } else {
                inner_at(rho) * rho.powf(-p) * (-c * rho * rho).exp()
            }
        },
        0.0,
        &grid,
        1e-10,
    )?;
    let total = *outer.last().unwrap();
    let values: Vec<f64> = outer.iter().map(|&v| total - v).collect();
    RadialFunction::new(r_d, values)
}

/// The explicit symmetrized solution w = w★ of Theorem-style comparison:
/// the radial solution driven by the nonincreasing rearranged source f★ on
/// the half-ball of radius r★.
pub fn symmetrized_solution(d: &Density, fstar: &RadialFunction, r_star: f64) -> Result<RadialFunction> {
    if !fstar.is_nonincreasing(1e-12 * fstar.values[0].abs().max(1.0)) {
        return Err(Error::Precondition(
            "symmetrized source must be nonincreasing".into(),
        ));
    }
    solve_radial(d, fstar, r_star)
}

/// Coefficient matrices A(x) = φ(x) M(r,θ) with M symmetric and pinched
/// between 1 and Λ.
#[derive(Debug, Clone, Copy)]
pub enum MatrixField {
    /// M = I
    Isotropic,
    /// M = diag(1, λ) in Cartesian coordinates
    AxisAligned { lambda: f64 },
    /// M = Rᵀ diag(1, λ) R with a fixed rotation angle
    Rotated { lambda: f64, angle: f64 },
}

impl MatrixField {
    /// (m11, m12, m22) of M in Cartesian coordinates at (r, θ).
    pub fn matrix(&self, _r: f64, _theta: f64) -> (f64, f64, f64) {
        match *self {
            MatrixField::Isotropic => (1.0, 0.0, 1.0),
            MatrixField::AxisAligned { lambda } => (1.0, 0.0, lambda),
            MatrixField::Rotated { lambda, angle } => {
                let (s, co) = angle.sin_cos();
                (
                    co * co + lambda * s * s,
                    (lambda - 1.0) * s * co,
                    s * s + lambda * co * co,
                )
            }
        }
    }
}

/// A degenerate elliptic problem on the half-disk of radius `r_d`.
pub struct ProblemSpec {
    pub density: Density,
    pub r_d: f64,
    pub matrix: MatrixField,
    pub lambda_bound: f64,
    pub source: GridFunction,
}

impl ProblemSpec {
    pub fn new(
        density: Density,
        matrix: MatrixField,
        lambda_bound: f64,
        source: GridFunction,
    ) -> Result<Self> {
        if lambda_bound < 1.0 {
            return Err(Error::Precondition(format!(
                "ellipticity bound must be >= 1, got {lambda_bound}"
            )));
        }
        let spec = ProblemSpec { density, r_d: source.r_d, matrix, lambda_bound, source };
        spec.check_ellipticity()?;
        Ok(spec)
    }

    /// Eigenvalues of M at every node must lie in [1, Λ].
    fn check_ellipticity(&self) -> Result<()> {
        let (p, m) = (self.source.radii, self.source.angles);
        for i in 0..=p {
            for j in 0..=m {
                let r = i as f64 * self.source.dr();
                let t = j as f64 * self.source.dtheta();
                let (a, b, c) = self.matrix.matrix(r, t);
                let tr = a + c;
                let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
                let (lo, hi) = (0.5 * (tr - disc), 0.5 * (tr + disc));
                if lo < 1.0 - 1e-9 || hi > self.lambda_bound + 1e-9 {
                    return Err(Error::Precondition(format!(
                        "ellipticity violated at node ({i},{j}): eigenvalues [{lo:.6}, {hi:.6}] \
                         outside [1, {}]",
                        self.lambda_bound
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Bilinear FEM solution of −div(A ∇u) = φ f on the polar grid of the
/// source, with u = 0 on the curved boundary and natural conditions on
/// {x_N = 0} and at the origin. The r = 0 nodes are collapsed to one
/// unknown.
pub fn solve_fd(p: &ProblemSpec) -> Result<GridFunction> {
    let (np, nm) = (p.source.radii, p.source.angles);
    let hr = p.source.dr();
    let ht = p.source.dtheta();
    let d = &p.density;
    // unknown numbering: 0 = collapsed origin, then (i-1)*(nm+1)+j+1 for
    // i = 1..np-1; the i = np ring is Dirichlet
    let dof = |i: usize, j: usize| -> Option<usize> {
        if i == np {
            None
        } else if i == 0 {
            Some(0)
        } else {
            Some(1 + (i - 1) * (nm + 1) + j)
        }
    };
    let n = 1 + (np - 1) * (nm + 1);
    let mut trip: Vec<(usize, usize, f64)> = Vec::with_capacity(16 * np * nm);
    let mut rhs = vec![0.0; n];
    let g = 1.0 / 3.0f64.sqrt();
    let gauss = [-g, g];
    for i in 0..np {
        for j in 0..nm {
            let nodes = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
            let fvals = [
                p.source.value(i, j),
                p.source.value(i + 1, j),
                p.source.value(i, j + 1),
                p.source.value(i + 1, j + 1),
            ];
            let mut ke = [[0.0f64; 4]; 4];
            let mut fe = [0.0f64; 4];
            for &gx in &gauss {
                for &gy in &gauss {
                    // reference coordinates (ξ, η) ∈ [-1,1]²
                    let r = (i as f64 + 0.5 * (gx + 1.0)) * hr;
                    let t = (j as f64 + 0.5 * (gy + 1.0)) * ht;
                    let shp = [
                        0.25 * (1.0 - gx) * (1.0 - gy),
                        0.25 * (1.0 + gx) * (1.0 - gy),
                        0.25 * (1.0 - gx) * (1.0 + gy),
                        0.25 * (1.0 + gx) * (1.0 + gy),
                    ];
                    let dshp_dr = [
                        -0.25 * (1.0 - gy) * 2.0 / hr,
                        0.25 * (1.0 - gy) * 2.0 / hr,
                        -0.25 * (1.0 + gy) * 2.0 / hr,
                        0.25 * (1.0 + gy) * 2.0 / hr,
                    ];
                    let dshp_dt = [
                        -0.25 * (1.0 - gx) * 2.0 / ht,
                        -0.25 * (1.0 + gx) * 2.0 / ht,
                        0.25 * (1.0 - gx) * 2.0 / ht,
                        0.25 * (1.0 + gx) * 2.0 / ht,
                    ];
                    let phi = d.weight_polar(r, t);
                    let wq = phi * r * (hr * 0.5) * (ht * 0.5);
                    // M rotated into the polar frame
                    let (m11, m12, m22) = p.matrix.matrix(r, t);
                    let (st, ct) = t.sin_cos();
                    let b11 = m11 * ct * ct + 2.0 * m12 * st * ct + m22 * st * st;
                    let b22 = m11 * st * st - 2.0 * m12 * st * ct + m22 * ct * ct;
                    let b12 = (m22 - m11) * st * ct + m12 * (ct * ct - st * st);
                    let fq: f64 = (0..4).map(|a| shp[a] * fvals[a]).sum();
                    for a in 0..4 {
                        let ga = (dshp_dr[a], dshp_dt[a] / r);
                        fe[a] += wq * fq * shp[a];
                        for bb in 0..4 {
                            let gb = (dshp_dr[bb], dshp_dt[bb] / r);
                            ke[a][bb] += wq
                                * (b11 * ga.0 * gb.0
                                    + b12 * (ga.0 * gb.1 + ga.1 * gb.0)
                                    + b22 * ga.1 * gb.1);
                        }
                    }
                }
            }
            for a in 0..4 {
                let Some(ia) = dof(nodes[a].0, nodes[a].1) else { continue };
                rhs[ia] += fe[a];
                for b in 0..4 {
                    if let Some(ib) = dof(nodes[b].0, nodes[b].1) {
                        trip.push((ia, ib, ke[a][b]));
                    }
                }
            }
        }
    }
    let mat = CsrMatrix::from_triplets(n, &mut trip);
    let (x, _res) = cg_jacobi(&mat, &rhs, 1e-12, 200 * n)?;
    let mut values = vec![0.0; (np + 1) * (nm + 1)];
    for i in 0..=np {
        for j in 0..=nm {
            values[i * (nm + 1) + j] = match dof(i, j) {
                Some(idx) => x[idx],
                None => 0.0,
            };
        }
    }
    GridFunction::new(np, nm, p.r_d, *d, values)
}

/// The comparison verdicts of the Talenti-type theorem.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// min over the grid of w − u★
    pub pointwise_margin: f64,
    /// (q, ∫|∇w|^q dμ − ∫|∇u|^q dμ) for q ∈ {0.5, 1, 1.5, 2}
    pub qnorm_margins: Vec<(f64, f64)>,
    /// sup of w, the scale the margins are judged against
    pub scale: f64,
}

impl ComparisonReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.pointwise_margin >= -tol * self.scale.max(1e-300)
            && self
                .qnorm_margins
                .iter()
                .all(|&(_, m)| m >= -tol * self.scale.max(1e-300))
    }
}

/// Computes u★, f★, r★ and w, then the pointwise and gradient q-norm
/// margins predicted nonnegative by the comparison theorem.
pub fn compare(u: &GridFunction, p: &ProblemSpec) -> Result<ComparisonReport> {
    let d = &p.density;
    let ustar = star_rearrangement(u)?;
    let fstar_grid = star_rearrangement(&p.source)?;
    let r_star = ustar.r_d;
    let fstar = RadialFunction::new(
        r_star,
        (0..=fstar_grid.radii).map(|i| fstar_grid.value(i, 0)).collect(),
    )?;
    let w = solve_radial(d, &fstar, r_star)?;
    let mut pointwise = f64::INFINITY;
    for i in 0..=ustar.radii {
        let r = i as f64 * ustar.dr();
        pointwise = pointwise.min(w.value(r) - ustar.value(i, 0));
    }
    // w as a grid function on the u★ grid for the gradient quadrature
    let wgrid = GridFunction::sample(ustar.radii, ustar.angles, r_star, *d, |r, _| w.value(r))?;
    let mut qnorm_margins = Vec::new();
    for q in [0.5, 1.0, 1.5, 2.0] {
        let gw = gradient_qnorm(&wgrid, q)?;
        let gu = gradient_qnorm(u, q)?;
        qnorm_margins.push((q, gw - gu));
    }
    let scale = w.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    Ok(ComparisonReport { pointwise_margin: pointwise, qnorm_margins, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn den(k: f64, c: f64) -> Density {
        Density::half_space(k, c, 2).unwrap()
    }

    #[test]
    fn radial_torsion_oracles() {
        let f = RadialFunction::sample(256, 1.0, |_| 1.0).unwrap();
        let w = solve_radial(&den(0.0, 0.0), &f, 1.0).unwrap();
        assert!((w.values[0] - 0.25).abs() < 1e-8, "w(0) = {}", w.values[0]);
        for i in (0..=256).step_by(32) {
            let r = w.radius(i);
            assert!((w.values[i] - (1.0 - r * r) / 4.0).abs() < 1e-8);
        }

        // exponent generalizes to N + k
        let w = solve_radial(&den(2.0, 0.0), &f, 1.0).unwrap();
        for i in (0..=256).step_by(32) {
            let r = w.radius(i);
            assert!((w.values[i] - (1.0 - r * r) / 8.0).abs() < 1e-8);
        }
        let d3 = Density::half_space(0.0, 0.0, 3).unwrap();
        let w = solve_radial(&d3, &f, 1.0).unwrap();
        for i in (0..=256).step_by(32) {
            let r = w.radius(i);
            assert!((w.values[i] - (1.0 - r * r) / 6.0).abs() < 1e-8);
        }

        // f(r) = r in the plane: (1 - r³)/9
        let f = RadialFunction::sample(256, 1.0, |r| r).unwrap();
        let w = solve_radial(&den(0.0, 0.0), &f, 1.0).unwrap();
        for i in (0..=256).step_by(32) {
            let r = w.radius(i);
            assert!((w.values[i] - (1.0 - r * r * r) / 9.0).abs() < 1e-7);
        }
    }

    #[test]
    fn zero_source_gives_zero() {
        let f = RadialFunction::sample(64, 1.0, |_| 0.0).unwrap();
        let w = symmetrized_solution(&den(1.0, 0.5), &f, 1.0).unwrap();
        assert!(w.values.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn symmetrized_requires_nonincreasing() {
        let f = RadialFunction::sample(64, 1.0, |r| r).unwrap();
        assert!(symmetrized_solution(&den(0.0, 0.0), &f, 1.0).is_err());
        let g = RadialFunction::sample(64, 1.0, |r| 1.0 - r).unwrap();
        assert!(symmetrized_solution(&den(0.0, 0.0), &g, 1.0).is_ok());
    }

    #[test]
    fn symmetrized_matches_radial_solver() {
        for (k, c) in [(0.0, 0.0), (1.0, 0.5), (2.0, 1.0)] {
            let d = den(k, c);
            let f = RadialFunction::sample(128, 1.2, |r| (2.0 - r) * (-r).exp()).unwrap();
            let a = symmetrized_solution(&d, &f, 1.2).unwrap();
            let b = solve_radial(&d, &f, 1.2).unwrap();
            let scale = a.values[0].abs();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn monotone_dependence_on_source() {
        let d = den(1.0, 0.5);
        let f1 = RadialFunction::sample(64, 1.0, |r| 1.0 + (3.0 * r).cos().powi(2)).unwrap();
        let f2 = RadialFunction::new(1.0, f1.values.iter().map(|v| v + 0.3).collect()).unwrap();
        let w1 = solve_radial(&d, &f1, 1.0).unwrap();
        let w2 = solve_radial(&d, &f2, 1.0).unwrap();
        for (a, b) in w1.values.iter().zip(&w2.values) {
            assert!(b >= a);
        }
    }

    #[test]
    fn ellipticity_is_enforced() {
        let d = den(0.0, 0.0);
        let src = GridFunction::sample(16, 16, 1.0, d, |_, _| 1.0).unwrap();
        assert!(ProblemSpec::new(d, MatrixField::AxisAligned { lambda: 4.0 }, 4.0, src.clone()).is_ok());
        assert!(ProblemSpec::new(d, MatrixField::AxisAligned { lambda: 4.0 }, 2.0, src.clone()).is_err());
        assert!(ProblemSpec::new(d, MatrixField::AxisAligned { lambda: 0.5 }, 1.0, src.clone()).is_err());
        assert!(ProblemSpec::new(d, MatrixField::Isotropic, 0.5, src).is_err());
    }

    #[test]
    fn fd_matches_torsion_at_center() {
        let d = den(0.0, 0.0);
        let src = GridFunction::sample(96, 96, 1.0, d, |_, _| 1.0).unwrap();
        let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).unwrap();
        let u = solve_fd(&p).unwrap();
        assert!((u.value(0, 0) - 0.25).abs() < 1e-3, "u(0) = {}", u.value(0, 0));
        // radial symmetry of the solution
        assert!(u.is_radial(1e-10));
    }

    #[test]
    fn fd_matches_radial_oracle_weighted() {
        let d = den(1.0, 0.5);
        let src = GridFunction::sample(96, 96, 1.0, d, |_, _| 1.0).unwrap();
        let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).unwrap();
        let u = solve_fd(&p).unwrap();
        let f = RadialFunction::sample(256, 1.0, |_| 1.0).unwrap();
        let w = solve_radial(&d, &f, 1.0).unwrap();
        let scale = w.values[0];
        for i in (0..=96).step_by(8) {
            let r = i as f64 / 96.0;
            assert!(
                (u.value(i, 48) - w.value(r)).abs() <= 1e-3 * scale,
                "r={r}: {} vs {}",
                u.value(i, 48),
                w.value(r)
            );
        }
    }

    #[test]
    fn fd_grid_convergence_second_order() {
        let d = den(0.0, 0.0);
        let mut errs = Vec::new();
        for n in [24usize, 48, 96] {
            let src = GridFunction::sample(n, n, 1.0, d, |_, _| 1.0).unwrap();
            let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).unwrap();
            let u = solve_fd(&p).unwrap();
            let mut e = 0.0f64;
            for i in 0..=n {
                let r = i as f64 / n as f64;
                e = e.max((u.value(i, 0) - (1.0 - r * r) / 4.0).abs());
            }
            errs.push(e);
        }
        let p1 = (errs[0] / errs[1]).log2();
        let p2 = (errs[1] / errs[2]).log2();
        assert!(
            (1.7..=2.3).contains(&p1) && (1.7..=2.3).contains(&p2),
            "orders {p1:.2}, {p2:.2} from errors {errs:?}"
        );
    }

    #[test]
    fn comparison_radial_equality_case() {
        let d = den(0.0, 0.0);
        let src = GridFunction::sample(96, 96, 1.0, d, |_, _| 1.0).unwrap();
        let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).unwrap();
        let u = solve_fd(&p).unwrap();
        let rep = compare(&u, &p).unwrap();
        assert!(rep.pointwise_margin.abs() <= 1e-3, "pointwise {}", rep.pointwise_margin);
        for &(q, m) in &rep.qnorm_margins {
            assert!(m.abs() <= 1e-3 * rep.scale.max(1.0), "q={q}: margin {m}");
        }
        assert!(rep.passes(2e-3));
    }

    #[test]
    fn comparison_anisotropic_cases() {
        for (k, c, lam) in [(0.0, 0.0, 4.0), (1.0, 0.5, 2.0), (2.0, 0.0, 4.0)] {
            let d = den(k, c);
            let src = GridFunction::sample(64, 64, 1.0, d, |r, t| 1.0 + 0.5 * (1.0 - r) * t.sin()).unwrap();
            let p = ProblemSpec::new(d, MatrixField::AxisAligned { lambda: lam }, lam, src).unwrap();
            let u = solve_fd(&p).unwrap();
            let rep = compare(&u, &p).unwrap();
            assert!(
                rep.passes(1e-3),
                "k={k} c={c} lam={lam}: pointwise {} qnorms {:?}",
                rep.pointwise_margin,
                rep.qnorm_margins
            );
        }
    }

    #[test]
    fn zero_source_comparison_is_exact() {
        let d = den(0.0, 0.0);
        let src = GridFunction::sample(32, 32, 1.0, d, |_, _| 0.0).unwrap();
        let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).unwrap();
        let u = solve_fd(&p).unwrap();
        assert!(u.values.iter().all(|&v| v.abs() < 1e-13));
        let rep = compare(&u, &p).unwrap();
        assert!(rep.pointwise_margin.abs() < 1e-12);
        for &(_, m) in &rep.qnorm_margins {
            assert!(m.abs() < 1e-10);
        }
    }
}
