//! Two-point boundary value problem -x'' = f(t, x), x(0) = x(1) = 0,
//! solved by Picard iteration of the kernel integral operator
//! (Fx)(t) = integral of G(t,s) f(s, x(s)) ds over [0,1].
//!
//! The kernel G(t,s) = t(1-s) for t <= s and s(1-t) for s <= t is only
//! piecewise smooth, so every quadrature splits at the diagonal; on each
//! side the integrand in s is as smooth as f, and for the row integral it
//! is linear, which both rules integrate exactly. The row integral is
//! -t^2/2 + t/2 with maximum 1/8 at t = 1/2, which makes the operator a
//! 1/8-contraction in the sup norm for right-hand sides that are
//! 1-Lipschitz in x.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapping::AlphaMap;
use crate::rng::SplitMix64;
use crate::theta::{audit_single_valued, ContractionAudit, ContractionParams, ThetaSpec};

#[derive(Debug, Error)]
pub enum BvpError {
    #[error("kernel argument ({0}, {1}) outside the unit square")]
    OutOfDomain(f64, f64),
    #[error("grid must have at least 2 intervals, got {0}")]
    GridTooCoarse(usize),
    #[error("Simpson quadrature requires an even interval count, got {0}")]
    OddSimpsonGrid(usize),
    #[error("right-hand side is not 1-Lipschitz: {0}")]
    NotLipschitz(String),
    #[error("grid function has {got} values, expected {expected}")]
    GridSizeMismatch { got: usize, expected: usize },
}

/// Kernel of the boundary value problem; symmetric, nonnegative, zero on
/// the boundary, continuous with a kink along s = t.
pub fn green_eval(t: f64, s: f64) -> Result<f64, BvpError> {
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&s) {
        return Err(BvpError::OutOfDomain(t, s));
    }
    Ok(if t <= s { t * (1.0 - s) } else { s * (1.0 - t) })
}

/// The closed catalog of right-hand sides; every entry is certified
/// 1-Lipschitz in its second argument so the 1/8 contraction bound
/// applies without further assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rhs {
    Constant {
        c: f64,
    },
    Sin,
    /// f(t, x) = a x + g0 + g1 t with |a| <= 1.
    Affine {
        a: f64,
        g0: f64,
        g1: f64,
    },
    ScaledSin {
        mu: f64,
    },
}

impl Rhs {
    pub fn validate(&self) -> Result<(), BvpError> {
        match self {
            Rhs::Constant { c } if !c.is_finite() => {
                Err(BvpError::NotLipschitz("constant is not finite".into()))
            }
            Rhs::Affine { a, g0, g1 } => {
                if !a.is_finite() || !g0.is_finite() || !g1.is_finite() {
                    Err(BvpError::NotLipschitz(
                        "affine coefficient not finite".into(),
                    ))
                } else if a.abs() > 1.0 {
                    Err(BvpError::NotLipschitz(format!(
                        "affine slope |{a}| exceeds 1"
                    )))
                } else {
                    Ok(())
                }
            }
            Rhs::ScaledSin { mu } => {
                if !mu.is_finite() || mu.abs() > 1.0 {
                    Err(BvpError::NotLipschitz(format!("|mu| = |{mu}| exceeds 1")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            Rhs::Constant { c } => *c,
            Rhs::Sin => x.sin(),
            Rhs::Affine { a, g0, g1 } => a * x + g0 + g1 * t,
            Rhs::ScaledSin { mu } => mu * x.sin(),
        }
    }

    /// Certified Lipschitz constant in the second argument.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Rhs::Constant { .. } => 0.0,
            Rhs::Sin => 1.0,
            Rhs::Affine { a, .. } => a.abs(),
            Rhs::ScaledSin { mu } => mu.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    Trapezoid,
    Simpson,
}

/// Problem description: right-hand side, grid resolution, quadrature
/// rule, and the Picard stopping data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvpProblem {
    pub rhs: Rhs,
    /// Number of grid intervals; nodes are t_i = i / n.
    pub n: usize,
    pub quadrature: Quadrature,
    pub eps_fix: f64,
    pub max_iter: usize,
}

impl BvpProblem {
    pub fn new(rhs: Rhs, n: usize, quadrature: Quadrature) -> Result<Self, BvpError> {
        rhs.validate()?;
        if n < 2 {
            return Err(BvpError::GridTooCoarse(n));
        }
        if quadrature == Quadrature::Simpson && !n.is_multiple_of(2) {
            return Err(BvpError::OddSimpsonGrid(n));
        }
        Ok(BvpProblem {
            rhs,
            n,
            quadrature,
            eps_fix: 1e-10,
            max_iter: 200,
        })
    }

    pub fn with_stopping(mut self, eps_fix: f64, max_iter: usize) -> Self {
        self.eps_fix = eps_fix;
        self.max_iter = max_iter;
        self
    }
}

/// Values at the grid nodes t_i = i / n, i = 0..=n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(n: usize) -> Self {
        GridFunction {
            values: vec![0.0; n + 1],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            values: (0..=n).map(|i| f(i as f64 / n as f64)).collect(),
        }
    }

    pub fn n_intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_dist(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

/// Composite rule over equally spaced values with spacing `h`.
/// For Simpson an odd interval count is handled by a 3/8 tail, a single
/// interval by the trapezoid; all weights stay positive either way.
fn integrate(values: &[f64], h: f64, rule: Quadrature) -> f64 {
    let m = values.len().saturating_sub(1);
    if m == 0 {
        return 0.0;
    }
    match rule {
        Quadrature::Trapezoid => {
            let inner: f64 = values[1..m].iter().sum();
            h * (0.5 * values[0] + inner + 0.5 * values[m])
        }
        Quadrature::Simpson => {
            if m == 1 {
                return h * 0.5 * (values[0] + values[1]);
            }
            let (even_part, tail) = if m.is_multiple_of(2) {
                (m, 0)
            } else {
                (m - 3, 3)
            };
            let mut total = 0.0;
            if even_part > 0 {
                let mut s = values[0] + values[even_part];
                for (off, v) in values[1..even_part].iter().enumerate() {
                    s += if off % 2 == 0 { 4.0 * v } else { 2.0 * v };
                }
                total += h / 3.0 * s;
            }
            if tail == 3 {
                let v = &values[even_part..=m];
                total += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            total
        }
    }
}

/// Integrates `f` over [lo, hi] with roughly `n_hint` intervals per unit
/// length; the interval count is forced even for Simpson.
fn integrate_smooth(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n_hint: usize,
    rule: Quadrature,
) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mut m = (((hi - lo) * n_hint as f64).ceil() as usize).max(1);
    if rule == Quadrature::Simpson && !m.is_multiple_of(2) {
        m += 1;
    }
    let h = (hi - lo) / m as f64;
    let values: Vec<f64> = (0..=m)
        .map(|j| f(lo + (hi - lo) * j as f64 / m as f64))
        .collect();
    integrate(&values, h, rule)
}

/// Row integral of the kernel at height `t`, split at the diagonal so
/// each piece is linear in s; agrees with -t^2/2 + t/2 up to rounding.
pub fn kernel_row_integral(t: f64, n: usize, rule: Quadrature) -> Result<f64, BvpError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BvpError::OutOfDomain(t, 0.0));
    }
    let left = integrate_smooth(|s| s * (1.0 - t), 0.0, t, n, rule);
    let right = integrate_smooth(|s| t * (1.0 - s), t, 1.0, n, rule);
    Ok(left + right)
}

/// Composite rule over the node range [start, end] of a node function
/// that is smooth on the whole grid (the kernel branch formulas extend
/// smoothly past the diagonal). A single-interval Simpson piece would
/// degrade to the trapezoid and leave an O(h^3) spike that the residual
/// stencil amplifies to O(h); instead it uses the cubic end formula on
/// three neighbouring nodes of the smooth extension.
fn integrate_nodes(
    g: &dyn Fn(usize) -> f64,
    start: usize,
    end: usize,
    h: f64,
    rule: Quadrature,
    n: usize,
) -> f64 {
    let m = end - start;
    if m == 0 {
        return 0.0;
    }
    if rule == Quadrature::Simpson && m == 1 && n >= 3 {
        return if start + 3 <= n {
            h / 24.0 * (9.0 * g(start) + 19.0 * g(start + 1) - 5.0 * g(start + 2) + g(start + 3))
        } else {
            h / 24.0 * (9.0 * g(end) + 19.0 * g(end - 1) - 5.0 * g(end - 2) + g(end - 3))
        };
    }
    let values: Vec<f64> = (start..=end).map(g).collect();
    integrate(&values, h, rule)
}

/// Applies the integral operator on the grid. The diagonal node t_i is a
/// grid node, so the quadrature over [0, t_i] and [t_i, 1] runs on grid
/// nodes where x is known; no interpolation is involved. Boundary rows
/// are exactly zero.
pub fn apply_operator(x: &GridFunction, prob: &BvpProblem) -> Result<GridFunction, BvpError> {
    let n = prob.n;
    if x.n_intervals() != n {
        return Err(BvpError::GridSizeMismatch {
            got: x.n_intervals(),
            expected: n,
        });
    }
    let h = 1.0 / n as f64;
    let fx: Vec<f64> = (0..=n)
        .map(|j| prob.rhs.eval(j as f64 * h, x.values[j]))
        .collect();
    let mut out = vec![0.0; n + 1];
    #[allow(clippy::needless_range_loop)]
    for i in 1..n {
        let t = i as f64 * h;
        // kernel branches as globally smooth node functions
        let left = |j: usize| (j as f64 * h) * (1.0 - t) * fx[j];
        let right = |j: usize| t * (1.0 - j as f64 * h) * fx[j];
        out[i] = integrate_nodes(&left, 0, i, h, prob.quadrature, n)
            + integrate_nodes(&right, i, n, h, prob.quadrature, n);
    }
    Ok(GridFunction { values: out })
}

/// One Picard run: iterations, the sup-norm difference history, and
/// whether the stopping tolerance was reached within the budget.
#[derive(Debug, Clone, Serialize)]
pub struct BvpRun {
    pub solution: GridFunction,
    pub iterations: usize,
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Iterates x <- Fx from `x0` until the sup-norm step drops below
/// `eps_fix` or the budget runs out. Non-convergence is reported in the
/// run record rather than as an error; it does not occur for catalog
/// right-hand sides.
pub fn solve_bvp(prob: &BvpProblem, x0: &GridFunction) -> Result<BvpRun, BvpError> {
    let mut x = x0.clone();
    let mut history = Vec::new();
    for it in 1..=prob.max_iter {
        let next = apply_operator(&x, prob)?;
        let step = next.sup_dist(&x);
        history.push(step);
        x = next;
        if step <= prob.eps_fix {
            return Ok(BvpRun {
                solution: x,
                iterations: it,
                history,
                converged: true,
            });
        }
    }
    Ok(BvpRun {
        solution: x,
        iterations: prob.max_iter,
        history,
        converged: false,
    })
}

/// Max over interior nodes of |-(x_{i-1} - 2 x_i + x_{i+1}) / h^2 -
/// f(t_i, x_i)|: how well the grid solution satisfies the differential
/// equation through the second-difference stencil.
pub fn residual_check(solution: &GridFunction, prob: &BvpProblem) -> Result<f64, BvpError> {
    let n = prob.n;
    if solution.n_intervals() != n {
        return Err(BvpError::GridSizeMismatch {
            got: solution.n_intervals(),
            expected: n,
        });
    }
    let h = 1.0 / n as f64;
    let v = &solution.values;
    let mut worst = 0.0f64;
    for i in 1..n {
        let second = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
        let r = (-second - prob.rhs.eval(i as f64 * h, v[i])).abs();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Draws `pairs` random grid-function pairs (interior values uniform in
/// [-3, 3], zero boundary) and returns the largest observed ratio
/// |Fx - Fy| / |x - y| in the sup norm.
pub fn estimate_lipschitz(prob: &BvpProblem, pairs: usize, seed: u64) -> Result<f64, BvpError> {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    let draw = |rng: &mut SplitMix64| {
        let mut g = GridFunction::zeros(prob.n);
        for v in g.values[1..prob.n].iter_mut() {
            *v = rng.next_f64() * 6.0 - 3.0;
        }
        g
    };
    for _ in 0..pairs {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let denom = x.sup_dist(&y);
        if denom == 0.0 {
            continue;
        }
        let num = apply_operator(&x, prob)?.sup_dist(&apply_operator(&y, prob)?);
        worst = worst.max(num / denom);
    }
    Ok(worst)
}

/// Audits the contraction inequality for the discrete operator over
/// sampled grid-function pairs, through the exponential comparison
/// function and the sup metric. Holds with k = 1/8 for catalog
/// right-hand sides and any lambda >= 0.
pub fn audit_operator_contraction(
    prob: &BvpProblem,
    samples: usize,
    seed: u64,
    k: f64,
    lambda: f64,
) -> Result<ContractionAudit, BvpError> {
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut g = GridFunction::zeros(prob.n);
        for v in g.values[1..prob.n].iter_mut() {
            *v = rng.next_f64() * 6.0 - 3.0;
        }
        points.push(g);
    }
    let params = ContractionParams {
        k,
        lambda,
        alpha: AlphaMap::Constant(1.0),
    };
    // apply_operator only fails on grid-size mismatch, which the
    // construction above rules out
    Ok(audit_single_valued(
        &points,
        |x| apply_operator(x, prob).expect("operator application on matching grid"),
        |x, y| x.sup_dist(y),
        &ThetaSpec::Exp,
        &params,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(rhs: Rhs, n: usize, rule: Quadrature) -> BvpProblem {
        BvpProblem::new(rhs, n, rule).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(green_eval(0.25, 0.5).unwrap(), 0.125);
        // both branches agree on the diagonal
        for t in [0.0, 0.3, 0.5, 0.9, 1.0] {
            assert!((green_eval(t, t).unwrap() - t * (1.0 - t)).abs() < 1e-15);
        }
        for s in [0.0, 0.25, 0.75, 1.0] {
            assert_eq!(green_eval(0.0, s).unwrap(), 0.0);
            assert_eq!(green_eval(1.0, s).unwrap(), 0.0);
        }
        assert!(green_eval(-0.1, 0.5).is_err());
        assert!(green_eval(0.5, 1.1).is_err());
    }

    #[test]
    fn kernel_symmetry_and_sign_on_grid() {
        let n = 37;
        for i in 0..=n {
            for j in 0..=n {
                let t = i as f64 / n as f64;
                let s = j as f64 / n as f64;
                let g = green_eval(t, s).unwrap();
                assert!(g >= 0.0);
                assert!((g - green_eval(s, t).unwrap()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn row_integral_matches_closed_form() {
        for rule in [Quadrature::Trapezoid, Quadrature::Simpson] {
            assert!((kernel_row_integral(0.5, 128, rule).unwrap() - 0.125).abs() < 1e-12);
            assert_eq!(kernel_row_integral(0.0, 128, rule).unwrap(), 0.0);
            assert!((kernel_row_integral(0.25, 128, rule).unwrap() - 3.0 / 32.0).abs() < 1e-12);
            // sweep against -t^2/2 + t/2
            let mut worst = 0.0f64;
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                let q = kernel_row_integral(t, 128, rule).unwrap();
                worst = worst.max((q - (-t * t / 2.0 + t / 2.0)).abs());
            }
            assert!(worst < 1e-12, "{rule:?}: max deviation {worst}");
        }
    }

    #[test]
    fn constant_rhs_gives_parabola_in_one_application() {
        let prob = problem(Rhs::Constant { c: 2.0 }, 128, Quadrature::Simpson);
        let fx = apply_operator(&GridFunction::zeros(128), &prob).unwrap();
        assert_eq!(fx.values[0], 0.0);
        assert_eq!(fx.values[128], 0.0);
        for (i, v) in fx.values.iter().enumerate() {
            let t = i as f64 / 128.0;
            assert!((v - t * (1.0 - t)).abs() < 1e-13, "node {i}");
        }
    }

    #[test]
    fn zero_rhs_maps_everything_to_zero() {
        let prob = problem(Rhs::Constant { c: 0.0 }, 64, Quadrature::Trapezoid);
        let bump = GridFunction::from_fn(64, |t| t * (1.0 - t));
        let fx = apply_operator(&bump, &prob).unwrap();
        assert!(fx.sup_norm() == 0.0);
        let run = solve_bvp(&prob, &bump).unwrap();
        assert!(run.converged);
        assert_eq!(run.iterations, 2);
        assert_eq!(run.solution.sup_norm(), 0.0);
    }

    #[test]
    fn constant_rhs_solution_is_exact_parabola() {
        let prob = problem(Rhs::Constant { c: 2.0 }, 128, Quadrature::Simpson);
        let run = solve_bvp(&prob, &GridFunction::zeros(128)).unwrap();
        assert!(run.converged);
        let mut worst = 0.0f64;
        for (i, v) in run.solution.values.iter().enumerate() {
            let t = i as f64 / 128.0;
            worst = worst.max((v - t * (1.0 - t)).abs());
        }
        assert!(worst <= 1e-8, "max nodal error {worst}");
        assert!((run.solution.values[64] - 0.25).abs() <= 1e-8);
        let residual = residual_check(&run.solution, &prob).unwrap();
        assert!(residual <= 1e-8, "residual {residual}");
    }

    #[test]
    fn residual_of_zero_solution_is_zero() {
        let prob = problem(Rhs::Constant { c: 0.0 }, 32, Quadrature::Simpson);
        assert_eq!(
            residual_check(&GridFunction::zeros(32), &prob).unwrap(),
            0.0
        );
    }

    #[test]
    fn sin_rhs_contracts_with_ratio_below_0_13() {
        let prob = problem(Rhs::Sin, 128, Quadrature::Simpson);
        let bump = GridFunction::from_fn(128, |t| 4.0 * t * (1.0 - t));
        let run = solve_bvp(&prob, &bump).unwrap();
        assert!(run.converged);
        assert!(
            run.history.len() >= 4,
            "want several steps, got {:?}",
            run.history
        );
        for w in run.history.windows(2) {
            if w[0] > 0.0 {
                assert!(w[1] / w[0] <= 0.13, "ratio {} too large", w[1] / w[0]);
            }
        }
    }

    #[test]
    fn empirical_lipschitz_stays_below_kernel_bound() {
        for rhs in [
            Rhs::Sin,
            Rhs::Constant { c: 2.0 },
            Rhs::Affine {
                a: 1.0,
                g0: 1.0,
                g1: 0.0,
            },
            Rhs::ScaledSin { mu: 1.0 },
        ] {
            let prob = problem(rhs, 64, Quadrature::Simpson);
            let est = estimate_lipschitz(&prob, 100, 2024).unwrap();
            assert!(est <= 0.125 + 1e-3, "{rhs:?}: estimate {est}");
        }
        // a pure affine right-hand side driven by constant offsets attains
        // the bound: F(x + c) - F(x) = c * row integral
        let prob = problem(
            Rhs::Affine {
                a: 1.0,
                g0: 0.0,
                g1: 0.0,
            },
            64,
            Quadrature::Simpson,
        );
        let x = GridFunction::zeros(64);
        let mut y = GridFunction::zeros(64);
        for v in y.values[1..64].iter_mut() {
            *v = 1.0;
        }
        let num = apply_operator(&x, &prob)
            .unwrap()
            .sup_dist(&apply_operator(&y, &prob).unwrap());
        let ratio = num / x.sup_dist(&y);
        assert!((ratio - 0.125).abs() < 1e-3, "attained ratio {ratio}");
    }

    #[test]
    fn operator_audit_holds_at_one_eighth() {
        let prob = problem(Rhs::Sin, 64, Quadrature::Simpson);
        for lambda in [0.0, 2.0] {
            let audit = audit_operator_contraction(&prob, 20, 7, 0.125, lambda).unwrap();
            assert!(audit.holds, "lambda {lambda}");
            if let Some(k_min) = audit.k_min {
                assert!(k_min <= 0.125 + 1e-9, "k_min {k_min}");
            }
        }
    }

    #[test]
    fn affine_rhs_residual_shrinks_quadratically() {
        // nontrivial solution: -x'' = x + 1 has a smooth nonpolynomial
        // solution, so the second-difference residual scales like h^2
        let rhs = Rhs::Affine {
            a: 1.0,
            g0: 1.0,
            g1: 0.0,
        };
        let r64 = {
            let prob = problem(rhs, 64, Quadrature::Simpson);
            let run = solve_bvp(&prob, &GridFunction::zeros(64)).unwrap();
            assert!(run.converged);
            residual_check(&run.solution, &prob).unwrap()
        };
        let r128 = {
            let prob = problem(rhs, 128, Quadrature::Simpson);
            let run = solve_bvp(&prob, &GridFunction::zeros(128)).unwrap();
            assert!(run.converged);
            residual_check(&run.solution, &prob).unwrap()
        };
        let ratio = r64 / r128;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "refinement ratio {ratio} (r64 {r64}, r128 {r128})"
        );
    }

    #[test]
    fn problem_validation() {
        assert!(BvpProblem::new(Rhs::Sin, 1, Quadrature::Trapezoid).is_err());
        assert!(BvpProblem::new(Rhs::Sin, 65, Quadrature::Simpson).is_err());
        assert!(BvpProblem::new(
            Rhs::Affine {
                a: 1.5,
                g0: 0.0,
                g1: 0.0
            },
            64,
            Quadrature::Simpson
        )
        .is_err());
        assert!(BvpProblem::new(Rhs::ScaledSin { mu: -2.0 }, 64, Quadrature::Simpson).is_err());
        assert!(BvpProblem::new(Rhs::ScaledSin { mu: -1.0 }, 64, Quadrature::Simpson).is_ok());
    }

    #[test]
    fn operator_rejects_mismatched_grid() {
        let prob = problem(Rhs::Sin, 64, Quadrature::Simpson);
        assert!(matches!(
            apply_operator(&GridFunction::zeros(32), &prob),
            Err(BvpError::GridSizeMismatch { .. })
        ));
    }
}
