//! Adaptive Gauss-Kronrod quadrature and safeguarded root finding.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod 15(7) panel; returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(mid - x) + f(mid + x);
        res_k += WGK[j] * fsum;
        if j % 2 == 1 {
            res_g += WG[j / 2] * fsum;
        }
    }
    res_k *= half;
    res_g *= half;
    (res_k, (res_k - res_g).abs())
}

/// Adaptive quadrature of `f` over `[a, b]` to absolute tolerance `abs_tol`
/// and relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // interval stack: (a, b, value, error)
    let (v0, e0) = gk15(&f, a, b);
    let mut stack = vec![(a, b, v0, e0)];
    let mut total = v0;
    let mut total_err = e0;
    let mut splits = 0usize;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        splits += 1;
        if splits > 100_000 {
            return Err(Error::Numerical(format!(
                "adaptive quadrature did not converge on [{a}, {b}] (err {total_err:.3e})"
            )));
        }
        // split the interval with the largest error estimate
        let (idx, _) = stack
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (ia, ib, iv, ie) = stack.swap_remove(idx);
        let im = 0.5 * (ia + ib);
        if im <= ia || im >= ib {
            // interval collapsed to machine precision; keep its estimate
            stack.push((ia, ib, iv, 0.0));
            total_err -= ie;
            continue;
        }
        let (vl, el) = gk15(&f, ia, im);
        let (vr, er) = gk15(&f, im, ib);
        total += vl + vr - iv;
        total_err += el + er - ie;
        stack.push((ia, im, vl, el));
        stack.push((im, ib, vr, er));
    }
    Ok(total)
}

/// Cumulative table of `∫_0^{r_i} f` on the given increasing grid, each panel
/// integrated adaptively. `grid[0]` need not be zero; integration starts at
/// `start`.
pub fn cumulative<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    grid: &[f64],
    abs_tol: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut prev = start;
    let panel_tol = abs_tol / (grid.len().max(1) as f64);
    for &r in grid {
        acc += integrate(&f, prev, r, panel_tol, 1e-12)?;
        out.push(acc);
        prev = r;
    }
    Ok(out)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let jf = j as f64;
            let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
            p0 = p1;
            p1 = p2;
        }
        let dp = nf * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Finds the root of a strictly increasing function `g` with `g(lo) <= 0 <= g(hi)`,
/// by bisection to width `bisect_width` followed by Newton with derivative `dg`
/// until `|g| <= newton_tol`.
pub fn increasing_root<F, D>(
    g: F,
    dg: D,
    mut lo: f64,
    mut hi: f64,
    bisect_width: f64,
    newton_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(Error::Numerical("root not bracketed".into()));
    }
    while hi - lo > bisect_width {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let gx = g(x);
        if gx.abs() <= newton_tol {
            return Ok(x);
        }
        let d = dg(x);
        if d <= 0.0 || !d.is_finite() {
            break;
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut step = gx / d;
        // keep iterates inside the bracket
        if x - step < lo || x - step > hi {
            step = if gx > 0.0 { 0.5 * (x - lo) } else { -0.5 * (hi - x) };
        }
        x -= step;
        // converged in the argument even if the residual floor is unreachable
        if step.abs() <= 1e-15 * x.abs() {
            return Ok(x);
        }
    }
    let gx = g(x);
    if gx.abs() <= newton_tol * 100.0 {
        Ok(x)
    } else {
        Err(Error::Numerical(format!(
            "Newton refinement stalled (residual {gx:.3e})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|t| t * t, 0.0, 2.0, 1e-12, 1e-12).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_growth() {
        // ∫_0^3 e^{t^2} t dt = (e^9 - 1)/2
        let v = integrate(|t| (t * t).exp() * t, 0.0, 3.0, 1e-12, 1e-12).unwrap();
        let exact = ((9.0f64).exp() - 1.0) / 2.0;
        assert!((v - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 t^{-1/2} dt = 2, integrable singularity at 0
        let v = integrate(|t| if t > 0.0 { t.powf(-0.5) } else { 0.0 }, 0.0, 1.0, 1e-9, 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-7);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // exact for degree <= 15: check t^10 on [-1,1] -> 2/11
        let v: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(10)).sum();
        assert!((v - 2.0 / 11.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn root_of_cubic() {
        let r = increasing_root(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1e-6, 1e-14).unwrap();
        assert!((r - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }
}
