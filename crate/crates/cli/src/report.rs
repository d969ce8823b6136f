//! Machine-readable run reports and their human-readable rendering.
//!
//! Every report embeds the tool version, the instance digest, and the
//! tolerances in force, so any printed number can be reproduced from the
//! instance file alone.

use serde::Serialize;

use proxikit::bvp::{BvpRun, Quadrature, Rhs};
use proxikit::instance::Instance;
use proxikit::metric::Point;
use proxikit::oracle::OracleReport;
use proxikit::solver::{BppResult, Certification, Outcome, Step, Tolerances, UniquenessReport};
use proxikit::theta::ThetaConditionsReport;

pub const TOOL_NAME: &str = "proxikit";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Steps beyond this count are elided from JSON reports.
const MAX_REPORTED_STEPS: usize = 500;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub command: String,
    pub instance_digest: Option<String>,
    pub tolerances: Option<Tolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_alpha_subsequential: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bvp: Option<BvpReport>,
}

#[derive(Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl RunReport {
    pub fn new(command: &str, instance: Option<&Instance>) -> Self {
        RunReport {
            tool: ToolInfo {
                name: TOOL_NAME,
                version: TOOL_VERSION,
            },
            command: command.to_string(),
            instance_digest: instance.map(|i| i.digest()),
            tolerances: instance.map(|i| i.tolerances),
            assume_alpha_subsequential: instance.and_then(|i| {
                i.file
                    .metadata
                    .as_ref()
                    .map(|m| m.assume_alpha_subsequential)
            }),
            analyze: None,
            check: None,
            solve: None,
            oracle: None,
            bvp: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub d_ab: f64,
    pub attaining_pair: (usize, usize),
    pub a0: Vec<usize>,
    pub a0_points: Vec<Point>,
    pub b0: Vec<usize>,
    pub b0_points: Vec<Point>,
    /// Hausdorff distances between image sets, row per A point.
    pub image_hausdorff: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub certification: Certification,
    pub theta_conditions: ThetaConditionsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessReport>,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub point_index: usize,
    pub point: Point,
    pub gap: f64,
    pub certified: bool,
    pub iterations: usize,
    pub steps_total: usize,
    pub steps: Vec<Step>,
    pub steps_truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
}

impl SolveReport {
    pub fn from_result(result: &BppResult, oracle: Option<&OracleReport>) -> Self {
        let steps_total = result.trace.steps.len();
        let truncated = steps_total > MAX_REPORTED_STEPS;
        SolveReport {
            outcome: result.trace.outcome.clone(),
            point_index: result.point_index,
            point: result.point.clone(),
            gap: result.gap,
            certified: result.certified,
            iterations: result.trace.steps.last().map_or(0, |s| s.n),
            steps_total,
            steps: result
                .trace
                .steps
                .iter()
                .take(MAX_REPORTED_STEPS)
                .cloned()
                .collect(),
            steps_truncated: truncated,
            oracle_agreement: oracle.map(|o| o.bpps.contains(&result.point_index)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleSection {
    pub d_ab: f64,
    pub bpps: Vec<usize>,
    pub bpp_points: Vec<Point>,
    pub gaps: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct BvpReport {
    pub rhs: Rhs,
    pub n: usize,
    pub quadrature: Quadrature,
    pub eps_fix: f64,
    pub converged: bool,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// Largest successive-difference ratio observed from the second step.
    pub contraction_ratio: Option<f64>,
    pub lipschitz_estimate: f64,
    pub residual: f64,
    pub midpoint_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<f64>>,
}

impl BvpReport {
    pub fn contraction_ratio(run: &BvpRun) -> Option<f64> {
        run.history
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }
}

pub fn render_human(report: &RunReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(
        &mut out,
        format!(
            "{} {} — {}",
            report.tool.name, report.tool.version, report.command
        ),
    );
    if let Some(d) = &report.instance_digest {
        push(&mut out, format!("instance digest: {d}"));
    }
    if report.assume_alpha_subsequential == Some(true) {
        push(
            &mut out,
            "note: instance records the (unchecked) subsequential admissibility assumption".into(),
        );
    }
    if let Some(a) = &report.analyze {
        push(&mut out, format!("dist(A, B) = {}", a.d_ab));
        push(
            &mut out,
            format!(
                "attained by A[{}] — B[{}]",
                a.attaining_pair.0, a.attaining_pair.1
            ),
        );
        let points = |pts: &[Point]| {
            pts.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        push(&mut out, format!("A0 = {{ {} }}", points(&a.a0_points)));
        push(&mut out, format!("B0 = {{ {} }}", points(&a.b0_points)));
        push(&mut out, "pairwise Hausdorff distances of images:".into());
        for (i, row) in a.image_hausdorff.iter().enumerate() {
            let cells = row
                .iter()
                .map(|v| format!("{v:>8.3}"))
                .collect::<Vec<_>>()
                .join(" ");
            push(&mut out, format!("  F(A[{i}]): {cells}"));
        }
    }
    if let Some(c) = &report.check {
        let cert = &c.certification;
        let fmt = |b: bool| if b { "holds" } else { "FAILS" };
        push(
            &mut out,
            format!(
                "range condition (F(A0) inside B0): {}",
                fmt(cert.range.holds)
            ),
        );
        push(
            &mut out,
            format!("weak P property: {}", fmt(cert.weak_p.holds)),
        );
        push(&mut out, format!("P property: {}", fmt(cert.p.holds)));
        for w in cert.p.witnesses.iter().take(3) {
            push(
                &mut out,
                format!(
                    "  witness: pairs {:?}, {:?} give A-side {} vs B-side {}",
                    w.pair1, w.pair2, w.d_a, w.d_b
                ),
            );
        }
        push(
            &mut out,
            format!(
                "alpha-proximal admissibility: {}",
                fmt(cert.admissible.holds)
            ),
        );
        push(
            &mut out,
            format!(
                "contraction audit over A0 (k = {}, lambda = {}): {}",
                cert.contraction.k,
                cert.contraction.lambda,
                fmt(cert.contraction.holds)
            ),
        );
        if let Some(k_min) = cert.contraction.k_min {
            push(
                &mut out,
                format!(
                    "  smallest feasible exponent k_min = {k_min:.6} (worst pair {:?})",
                    cert.contraction.worst_pair
                ),
            );
        } else {
            push(&mut out, "  no pair constrains the exponent".into());
        }
        push(
            &mut out,
            format!(
                "theta conditions: monotone {}, limit-to-one {}, limit-exponent {}",
                c.theta_conditions.theta1,
                c.theta_conditions.theta2,
                if c.theta_conditions.theta3.pass {
                    format!(
                        "passes at k = {:?} (estimate {:?})",
                        c.theta_conditions.theta3.best_k, c.theta_conditions.theta3.limit_estimate
                    )
                } else if c.theta_conditions.theta3.decays_to_zero {
                    "flagged: estimate decays to zero for every exponent".to_string()
                } else {
                    "flagged: no stable estimate".to_string()
                }
            ),
        );
        push(
            &mut out,
            format!("all solver hypotheses: {}", fmt(cert.hypotheses_hold)),
        );
        if let Some(u) = &c.uniqueness {
            if let Some(d) = &u.diagnostic {
                push(&mut out, format!("uniqueness screen: {d}"));
            }
        }
    }
    if let Some(s) = &report.solve {
        push(&mut out, format!("outcome: {:?}", s.outcome));
        push(
            &mut out,
            format!(
                "point A[{}] = {} with gap {} after {} iterations (certified: {})",
                s.point_index, s.point, s.gap, s.iterations, s.certified
            ),
        );
        if let Some(agree) = s.oracle_agreement {
            push(&mut out, format!("oracle agreement: {agree}"));
        }
        let show = s.steps.len().min(12);
        for step in &s.steps[..show] {
            push(
                &mut out,
                format!(
                    "  n={:<4} x=A[{}] y=B[{}] gap={:.3e} d_step={} bound={}",
                    step.n,
                    step.x,
                    step.y,
                    step.gap,
                    step.d_step.map_or("-".into(), |v| format!("{v:.3e}")),
                    step.bound.map_or("-".into(), |v| format!("{v:.3e}")),
                ),
            );
        }
        if s.steps_total > show {
            push(&mut out, format!("  ... {} steps total", s.steps_total));
        }
    }
    if let Some(o) = &report.oracle {
        push(&mut out, format!("dist(A, B) = {}", o.d_ab));
        let pts = o
            .bpp_points
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        push(
            &mut out,
            format!("best proximity points (indices {:?}): {{ {pts} }}", o.bpps),
        );
    }
    if let Some(b) = &report.bvp {
        push(
            &mut out,
            format!(
                "bvp: {:?}, n = {}, {:?}, eps_fix = {:.1e}",
                b.rhs, b.n, b.quadrature, b.eps_fix
            ),
        );
        push(
            &mut out,
            format!(
                "converged: {} after {} iterations; x(1/2) = {:.10}",
                b.converged, b.iterations, b.midpoint_value
            ),
        );
        if let Some(r) = b.contraction_ratio {
            push(&mut out, format!("max successive-difference ratio: {r:.4}"));
        }
        push(
            &mut out,
            format!(
                "empirical Lipschitz estimate: {:.6}; second-difference residual: {:.3e}",
                b.lipschitz_estimate, b.residual
            ),
        );
        if let Some(p) = &b.csv_path {
            push(&mut out, format!("solution written to {p}"));
        }
    }
    out
}
