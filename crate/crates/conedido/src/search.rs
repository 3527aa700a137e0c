//! Variational machinery over starlike profiles: Euler residual, Lagrange
//! multiplier, measure-constrained perimeter descent and the second
//! variation quadratic form.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::profile::{derivative, fg, ProfileQuadrature, RadialProfile};
use crate::quad;
use std::f64::consts::PI;
use std::io::Write;

/// Options of the projected gradient flow.
#[derive(Debug, Clone)]
pub struct FlowOptions {
    /// Initial step size.
    pub eta: f64,
    pub max_iters: usize,
    /// Sup-norm profile change below which the flow stops.
    pub tol: f64,
    /// Relative measure error after each projection.
    pub projection_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            eta: 0.1,
            max_iters: 100_000,
            tol: 1e-10,
            projection_tol: 1e-10,
        }
    }
}

impl FlowOptions {
    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.tol > 0.0 && self.projection_tol > 0.0) {
            return Err(Error::Precondition(
                "flow step size and tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of [`minimize_perimeter`]: the last iterate plus convergence data.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub profile: RadialProfile,
    pub converged: bool,
    pub iterations: usize,
    pub perimeter: f64,
    pub measure: f64,
}

/// Stationarity summary of a profile.
#[derive(Debug, Clone)]
pub struct VariationReport {
    pub gamma: f64,
    pub euler_residual_norm: f64,
    /// (test-direction id, quadratic-form value)
    pub second_variation_values: Vec<(String, f64)>,
}

/// The multiplier γ = (2cR² + k + 1)/R that makes ρ ≡ R a critical point.
pub fn lagrange_multiplier(d: &Density, radius: f64) -> Result<f64> {
    if radius <= 0.0 {
        return Err(Error::Domain(format!("radius must be > 0, got {radius}")));
    }
    Ok((2.0 * d.c * radius * radius + d.k + 1.0) / radius)
}

/// Least-squares multiplier of a sampled profile: minimizes the discrete
/// Euler residual over γ. Reduces to [`lagrange_multiplier`] on constants.
pub fn best_multiplier(p: &RadialProfile) -> Result<f64> {
    let stat = stationary_parts(p)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 1..p.panels() {
        num += stat.lhs[j] * stat.fz[j];
        den += stat.fz[j] * stat.fz[j];
    }
    if den == 0.0 {
        return Err(Error::Numerical("degenerate profile: F'z vanishes".into()));
    }
    Ok(num / den)
}

struct StationaryParts {
    /// −d/dθ(G_p z) + G_r z at every node (endpoint entries unused).
    lhs: Vec<f64>,
    /// F′ z at every node.
    fz: Vec<f64>,
}

fn stationary_parts(p: &RadialProfile) -> Result<StationaryParts> {
    let (k, c) = (p.density.k, p.density.c);
    let m = p.panels();
    let h = p.step();
    let dr = p.derivative();
    let z: Vec<f64> = (0..=m).map(|j| p.theta(j).sin().max(0.0).powf(k)).collect();
    let w: Vec<f64> = (0..=m)
        .map(|j| fg::g_p(k, c, p.rho[j], dr[j]) * z[j])
        .collect();
    let mut lhs = vec![0.0; m + 1];
    let mut fz = vec![0.0; m + 1];
    for j in 1..m {
        let dw = (w[j + 1] - w[j - 1]) / (2.0 * h);
        lhs[j] = -dw + fg::g_r(k, c, p.rho[j], dr[j]) * z[j];
        fz[j] = fg::f_prime(k, c, p.rho[j]) * z[j];
    }
    Ok(StationaryParts { lhs, fz })
}

/// Pointwise Euler residual −d/dθ(G_p z) + G_r z − γF′z at the interior
/// nodes θ_1 .. θ_{M−1}, by second-order differences.
pub fn euler_residual(p: &RadialProfile, gamma: f64) -> Result<Vec<f64>> {
    let stat = stationary_parts(p)?;
    Ok((1..p.panels())
        .map(|j| stat.lhs[j] - gamma * stat.fz[j])
        .collect())
}

/// Sup-norm of [`euler_residual`].
pub fn euler_residual_norm(p: &RadialProfile, gamma: f64) -> Result<f64> {
    Ok(euler_residual(p, gamma)?
        .iter()
        .fold(0.0, |a, &v| a.max(v.abs())))
}

/// Projects κ onto the linearized measure constraint ∫F′κz dθ = 0 by
/// subtracting its F′z-weighted mean.
pub fn project_admissible(p: &RadialProfile, kappa: &[f64]) -> Result<Vec<f64>> {
    if kappa.len() != p.rho.len() {
        return Err(Error::Precondition("direction length must match profile".into()));
    }
    let q = ProfileQuadrature::new(&p.density, p.panels())?;
    let alpha = q.node_weights();
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &kj) in kappa.iter().enumerate() {
        let fp = q.f_prime(p.rho[j]);
        num += alpha[j] * fp * kj;
        den += alpha[j] * fp;
    }
    let shift = num / den;
    Ok(kappa.iter().map(|&kj| kj - shift).collect())
}

/// The second-variation quadratic form at a fixed profile and multiplier,
/// with precomputed panel moments of z = sin^k θ so repeated directions are
/// cheap.
///
/// Directions are taken piecewise linear between the nodes and integrated
/// exactly against z; the coefficients G_rr, G_rp, G_pp, F″ are frozen at
/// the panel midpoints (exact on constant profiles, O(h²) otherwise). At a
/// constant minimizer the value is therefore the continuous second
/// variation of an admissible W^{1,2} direction, hence has certified sign.
pub struct SecondVariationForm {
    gamma_coeff: Vec<f64>,
    rr: Vec<f64>,
    rp: Vec<f64>,
    pp: Vec<f64>,
    /// per-panel z moments against {L², LR, R², L, R, 1} of the two linear
    /// hat restrictions
    mom: Vec<[f64; 6]>,
    /// node weights α_j and F′(ρ_j), for the constraint check
    alpha: Vec<f64>,
    fp: Vec<f64>,
    h: f64,
}

impl SecondVariationForm {
    pub fn new(p: &RadialProfile, gamma: f64) -> Result<Self> {
        let (k, c) = (p.density.k, p.density.c);
        let m = p.panels();
        let h = p.step();
        let zk = |t: f64| t.sin().max(0.0).powf(k);
        let mut mom = Vec::with_capacity(m);
        let mut rr = Vec::with_capacity(m);
        let mut rp = Vec::with_capacity(m);
        let mut pp = Vec::with_capacity(m);
        let mut gamma_coeff = Vec::with_capacity(m);
        for j in 0..m {
            let (t0, t1) = (j as f64 * h, (j + 1) as f64 * h);
            let lin = move |t: f64| (t1 - t) / h;
            let tol = (1e-15, 1e-12);
            let m_ll = quad::integrate(|t| lin(t) * lin(t) * zk(t), t0, t1, tol.0, tol.1)?;
            let m_lr = quad::integrate(|t| lin(t) * (1.0 - lin(t)) * zk(t), t0, t1, tol.0, tol.1)?;
            let m_rr = quad::integrate(|t| (1.0 - lin(t)).powi(2) * zk(t), t0, t1, tol.0, tol.1)?;
            let m_l = quad::integrate(|t| lin(t) * zk(t), t0, t1, tol.0, tol.1)?;
            let m_r = quad::integrate(|t| (1.0 - lin(t)) * zk(t), t0, t1, tol.0, tol.1)?;
            mom.push([m_ll, m_lr, m_rr, m_l, m_r, m_l + m_r]);
            let r_mid = 0.5 * (p.rho[j] + p.rho[j + 1]);
            let p_mid = (p.rho[j + 1] - p.rho[j]) / h;
            rr.push(fg::g_rr(k, c, r_mid, p_mid));
            rp.push(fg::g_rp(k, c, r_mid, p_mid));
            pp.push(fg::g_pp(k, c, r_mid, p_mid));
            gamma_coeff.push(gamma * fg::f_pprime(k, c, r_mid));
        }
        let q = ProfileQuadrature::new(&p.density, m)?;
        let fp: Vec<f64> = p.rho.iter().map(|&r| q.f_prime(r)).collect();
        Ok(SecondVariationForm {
            gamma_coeff,
            rr,
            rp,
            pp,
            mom,
            alpha: q.node_weights().to_vec(),
            fp,
            h,
        })
    }

    /// Residual of the linearized measure constraint ∫F′κz dθ, relative to
    /// its natural scale.
    pub fn constraint_defect(&self, kappa: &[f64]) -> f64 {
        let mut cst = 0.0;
        let mut scale = 0.0;
        let kmax = kappa.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        for (j, &kj) in kappa.iter().enumerate() {
            cst += self.alpha[j] * self.fp[j] * kj;
            scale += self.alpha[j] * self.fp[j];
        }
        cst / (scale * kmax.max(1e-300))
    }

    pub fn value(&self, kappa: &[f64]) -> Result<f64> {
        if kappa.len() != self.alpha.len() {
            return Err(Error::Precondition("direction length must match profile".into()));
        }
        let defect = self.constraint_defect(kappa);
        if defect.abs() > 1e-8 {
            return Err(Error::Precondition(format!(
                "direction violates the measure constraint: {defect:.3e}"
            )));
        }
        let mut acc = 0.0;
        for (j, m) in self.mom.iter().enumerate() {
            let (k0, k1) = (kappa[j], kappa[j + 1]);
            let dk = (k1 - k0) / self.h;
            let sq = k0 * k0 * m[0] + 2.0 * k0 * k1 * m[1] + k1 * k1 * m[2];
            let lin = k0 * m[3] + k1 * m[4];
            acc += (self.rr[j] - self.gamma_coeff[j]) * sq
                + 2.0 * self.rp[j] * dk * lin
                + self.pp[j] * dk * dk * m[5];
        }
        Ok(acc)
    }
}

/// Second variation ∫₀^π (G_rr κ² + 2G_rp κκ′ + G_pp (κ′)² − γF″κ²) z dθ.
///
/// κ must satisfy the linearized constraint ∫F′κz = 0 within 1e−8 of its
/// natural scale; use [`project_admissible`] first otherwise.
pub fn second_variation(p: &RadialProfile, kappa: &[f64], gamma: f64) -> Result<f64> {
    SecondVariationForm::new(p, gamma)?.value(kappa)
}

/// margin = P_μ(p) − I_μ(μ(p)); the isoperimetric inequality predicts it is
/// nonnegative up to discretization error.
pub fn verify_isoperimetric(d: &Density, p: &RadialProfile) -> Result<f64> {
    let q = ProfileQuadrature::new(d, p.panels())?;
    let m = q.measure(&p.rho);
    let per = q.perimeter(&p.rho);
    Ok(per - d.isoperimetric_profile(m)?)
}

/// Builds a [`VariationReport`] at the profile's least-squares multiplier,
/// projecting every test direction before evaluating the quadratic form.
pub fn variation_report(
    p: &RadialProfile,
    directions: &[(String, Vec<f64>)],
) -> Result<VariationReport> {
    let gamma = best_multiplier(p)?;
    let norm = euler_residual_norm(p, gamma)?;
    let mut values = Vec::with_capacity(directions.len());
    for (id, kappa) in directions {
        let adm = project_admissible(p, kappa)?;
        values.push((id.clone(), second_variation(p, &adm, gamma)?));
    }
    Ok(VariationReport {
        gamma,
        euler_residual_norm: norm,
        second_variation_values: values,
    })
}

/// Gradient of the discrete perimeter in the z dθ inner product:
/// entries g_i with δP = a·Σ α_i g_i v_i for node perturbations v.
fn perimeter_gradient(q: &ProfileQuadrature, rho: &[f64]) -> Vec<f64> {
    let m = rho.len() - 1;
    let h = PI / m as f64;
    let (k, c) = (q.density.k, q.density.c);
    let alpha = q.node_weights();
    let dr = derivative(rho, h);
    let gp: Vec<f64> = (0..=m).map(|j| alpha[j] * fg::g_p(k, c, rho[j], dr[j])).collect();
    let mut grad = vec![0.0; m + 1];
    for j in 0..=m {
        grad[j] += alpha[j] * fg::g_r(k, c, rho[j], dr[j]);
    }
    // adjoint of the difference stencils behind ρ'
    let s = 1.0 / (2.0 * h);
    grad[0] += -3.0 * s * gp[0];
    grad[1] += 4.0 * s * gp[0];
    grad[2] += -s * gp[0];
    grad[m] += 3.0 * s * gp[m];
    grad[m - 1] += -4.0 * s * gp[m];
    grad[m - 2] += s * gp[m];
    for j in 1..m {
        grad[j + 1] += s * gp[j];
        grad[j - 1] += -s * gp[j];
    }
    for j in 0..=m {
        grad[j] /= alpha[j];
    }
    grad
}

/// Rescales ρ ← λρ so that μ(λρ) = target, by Newton on λ.
fn rescale_measure(q: &ProfileQuadrature, rho: &mut [f64], target: f64, rel_tol: f64) -> Result<()> {
    let mut lambda = 1.0;
    for _ in 0..80 {
        let scaled: Vec<f64> = rho.iter().map(|&r| lambda * r).collect();
        let mu = q.measure(&scaled);
        if (mu - target).abs() <= rel_tol * target {
            for r in rho.iter_mut() {
                *r *= lambda;
            }
            return Ok(());
        }
        let alpha = q.node_weights();
        let dmu: f64 = q.density.a
            * alpha
                .iter()
                .zip(rho.iter())
                .map(|(a, &r)| a * q.f_prime(lambda * r) * r)
                .sum::<f64>();
        lambda -= (mu - target) / dmu;
        if !(lambda > 0.0) {
            return Err(Error::Numerical("measure rescaling left the feasible range".into()));
        }
    }
    Err(Error::Numerical("measure rescaling did not converge".into()))
}

/// Measure-constrained perimeter descent from `rho0`, with the flow trace
/// streamed as `iter,perimeter,measure,sup_change` CSV rows if given.
pub fn minimize_perimeter_traced(
    d: &Density,
    target: f64,
    rho0: &RadialProfile,
    opts: &FlowOptions,
    mut trace: Option<&mut dyn Write>,
) -> Result<FlowResult> {
    opts.validate()?;
    if target <= 0.0 {
        return Err(Error::Domain(format!("target measure must be > 0, got {target}")));
    }
    let q = ProfileQuadrature::new(d, rho0.panels())?;
    let mut rho = rho0.rho.clone();
    rescale_measure(&q, &mut rho, target, opts.projection_tol)?;
    let mut per = q.perimeter(&rho);
    let floor = 1e-9 * rho.iter().cloned().fold(0.0, f64::max);
    let mut eta = opts.eta;
    let mut converged = false;
    let mut iterations = 0;
    if let Some(w) = trace.as_deref_mut() {
        writeln!(w, "iter,perimeter,measure,sup_change").map_err(|e| Error::Input(e.to_string()))?;
    }
    for iter in 0..opts.max_iters {
        iterations = iter + 1;
        let grad = perimeter_gradient(&q, &rho);
        // project out the measure direction in the F'z-weighted product
        let alpha = q.node_weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &g) in grad.iter().enumerate() {
            let fp = q.f_prime(rho[j]);
            num += alpha[j] * fp * g;
            den += alpha[j] * fp;
        }
        let shift = num / den;
        let dir: Vec<f64> = grad.iter().map(|&g| g - shift).collect();

        // backtracking: halve η until the projected step decreases P
        let mut accepted = None;
        let mut step = eta;
        while step > 1e-13 * opts.eta {
            let mut cand: Vec<f64> = rho
                .iter()
                .zip(&dir)
                .map(|(&r, &v)| (r - step * v).max(floor))
                .collect();
            if rescale_measure(&q, &mut cand, target, opts.projection_tol).is_ok() {
                let pc = q.perimeter(&cand);
                if pc < per {
                    accepted = Some((cand, pc));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((cand, pc)) = accepted else {
            // no descent direction at any step size: stationary
            converged = true;
            break;
        };
        let sup_change = rho
            .iter()
            .zip(&cand)
            .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()));
        rho = cand;
        per = pc;
        eta = (2.0 * step).min(opts.eta);
        if let Some(w) = trace.as_deref_mut() {
            writeln!(w, "{iter},{per:.17e},{:.17e},{sup_change:.3e}", q.measure(&rho))
                .map_err(|e| Error::Input(e.to_string()))?;
        }
        if sup_change <= opts.tol {
            converged = true;
            break;
        }
    }
    let measure = q.measure(&rho);
    Ok(FlowResult {
        profile: RadialProfile::new(rho, *d)?,
        converged,
        iterations,
        perimeter: per,
        measure,
    })
}

/// [`minimize_perimeter_traced`] without a trace sink.
pub fn minimize_perimeter(
    d: &Density,
    target: f64,
    rho0: &RadialProfile,
    opts: &FlowOptions,
) -> Result<FlowResult> {
    minimize_perimeter_traced(d, target, rho0, opts, None)
}

/// Both sides of the integrated stationarity identity together with the
/// Euler defect that separates them on non-critical profiles:
/// rhs − lhs = ∫ (e/z)′ ρ′ z dθ, where e is the Euler residual. On critical
/// profiles the defect vanishes and lhs = rhs.
pub struct StationarityIdentity {
    /// ∫ G_p ρ′ (z′/z)′ z dθ = −k ∫ e^{cρ²}ρ^k (ρ²+ρ′²)^{−1/2} ρ′² sin^{k−2}θ dθ
    pub lhs: f64,
    /// ∫ (G_rr ρ′² + 2G_rp ρ′ρ″ + G_pp ρ″² − γF″ρ′²) z dθ
    pub rhs: f64,
    /// ∫ (e/z)′ ρ′ z dθ
    pub defect: f64,
}

/// Evaluates [`StationarityIdentity`] at the given multiplier. Quadrature is
/// the midpoint-in-nodes trapezoid rule skipping the two endpoint nodes,
/// where sin^{k−2}θ may be singular for k < 2; the ρ′² factor keeps the
/// integrands finite for the smooth symmetric profiles of interest.
pub fn stationarity_identity(p: &RadialProfile, gamma: f64) -> Result<StationarityIdentity> {
    let (k, c) = (p.density.k, p.density.c);
    let m = p.panels();
    let h = p.step();
    let dr = p.derivative();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for j in 1..m {
        let t = p.theta(j);
        let z = t.sin().powf(k);
        let (r, pr) = (p.rho[j], dr[j]);
        let s = (r * r + pr * pr).sqrt();
        lhs += -k * (c * r * r).exp() * r.powf(k) / s * pr * pr * t.sin().powf(k - 2.0) * h;
        let ppr = (p.rho[j + 1] - 2.0 * p.rho[j] + p.rho[j - 1]) / (h * h);
        rhs += (fg::g_rr(k, c, r, pr) * pr * pr
            + 2.0 * fg::g_rp(k, c, r, pr) * pr * ppr
            + fg::g_pp(k, c, r, pr) * ppr * ppr
            - gamma * fg::f_pprime(k, c, r) * pr * pr)
            * z
            * h;
    }
    let stat = stationary_parts(p)?;
    // e/z at interior nodes, then a centered derivative of it
    let eoz: Vec<f64> = (1..m)
        .map(|j| {
            let z = p.theta(j).sin().powf(k);
            (stat.lhs[j] - gamma * stat.fz[j]) / z
        })
        .collect();
    let deoz = derivative(&eoz, h);
    let mut defect = 0.0;
    for j in 1..m {
        let z = p.theta(j).sin().powf(k);
        defect += deoz[j - 1] * dr[j] * z * h;
    }
    Ok(StationarityIdentity { lhs, rhs, defect })
}
