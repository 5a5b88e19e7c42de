//! Name-keyed registry of evaluation strategies.
//!
//! Every way of producing `(J, omega, tau, eta)` for one oscillator state —
//! the two residue series, action quadrature paired with the direct period
//! integral, the hypergeometric closed form, and the dynamical simulation —
//! sits behind [`EvalMethod`]. The CLI selects strategies by name at
//! runtime, and cross-method comparison is just a walk over the registry.
//!
//! Strategies never abort a sweep: an oracle failure is reported as a
//! [`ResultFlag::ConvergenceFailure`] / [`ResultFlag::EnergyDrift`] row with
//! the affected quantities left empty.

use serde::Serialize;

use crate::action::{self, DEFAULT_ORDER};
use crate::frequency::{self, SeriesForm};
use crate::model::{EnergySpec, OscillatorParams};
use crate::oracle::{self, OdeConfig, OracleError, QuadratureConfig};
use crate::{MethodKind, ResultFlag, UNVALIDATED_EPSILON};

/// Everything a strategy needs for one evaluation.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub params: OscillatorParams,
    pub energy: EnergySpec,
    pub order: usize,
    pub quadrature: QuadratureConfig,
    pub ode: OdeConfig,
}

impl EvalContext {
    pub fn new(params: OscillatorParams, energy: EnergySpec) -> Self {
        Self {
            params,
            energy,
            order: DEFAULT_ORDER,
            quadrature: QuadratureConfig::default(),
            ode: OdeConfig::default(),
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }
}

/// One evaluated row: the machine-readable output unit of the CLI.
///
/// Quantities a method does not produce (or could not compute) are `None`;
/// all present values are finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub epsilon: f64,
    pub method: MethodKind,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub omega: Option<f64>,
    pub tau: Option<f64>,
    pub eta: Option<f64>,
    pub order: usize,
    pub error_estimate: Option<f64>,
    pub flags: Vec<ResultFlag>,
}

impl OutputRecord {
    fn empty(ctx: &EvalContext, method: MethodKind, order: usize) -> Self {
        Self {
            epsilon: ctx.energy.epsilon(),
            method,
            j: None,
            omega: None,
            tau: None,
            eta: None,
            order,
            error_estimate: None,
            flags: Vec::new(),
        }
    }

    /// Appends a flag unless already present.
    pub fn push_flag(&mut self, flag: ResultFlag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }
}

/// A strategy that evaluates one oscillator state.
pub trait EvalMethod: Send + Sync {
    fn kind(&self) -> MethodKind;

    fn name(&self) -> &'static str {
        self.kind().as_str()
    }

    /// Produces a record; failures surface as flags, never as panics or
    /// aborts, so sweeps can keep going.
    fn evaluate(&self, ctx: &EvalContext) -> OutputRecord;
}

fn flag_for(err: &OracleError) -> ResultFlag {
    match err {
        OracleError::EnergyDrift { .. } => ResultFlag::EnergyDrift,
        _ => ResultFlag::ConvergenceFailure,
    }
}

/// Series strategy covering both residue forms.
struct SeriesMethod {
    form: SeriesForm,
}

impl EvalMethod for SeriesMethod {
    fn kind(&self) -> MethodKind {
        self.form.method_kind()
    }

    fn evaluate(&self, ctx: &EvalContext) -> OutputRecord {
        let action = match self.form {
            SeriesForm::Pdx => action::action_pdx(&ctx.params, &ctx.energy, ctx.order),
            SeriesForm::Xdp => action::action_xdp(&ctx.params, &ctx.energy, ctx.order),
        };
        let freq = frequency::frequency_from_action(&ctx.params, &ctx.energy, ctx.order, self.form);
        let mut record = OutputRecord::empty(ctx, self.kind(), ctx.order);
        record.j = Some(action.value);
        record.omega = Some(freq.omega);
        record.tau = Some(freq.period);
        record.eta = Some(freq.eta);
        record.error_estimate = Some(action.error_estimate.max(freq.error_estimate));
        for flag in action.flags.iter().chain(freq.flags.iter()) {
            record.push_flag(*flag);
        }
        record
    }
}

/// Quadrature strategy: action integral for `J`, direct period integral for
/// `tau`.
struct QuadratureMethod;

impl EvalMethod for QuadratureMethod {
    fn kind(&self) -> MethodKind {
        MethodKind::Quadrature
    }

    fn evaluate(&self, ctx: &EvalContext) -> OutputRecord {
        let mut record = OutputRecord::empty(ctx, self.kind(), 0);
        match oracle::action_quadrature(&ctx.params, &ctx.energy, &ctx.quadrature) {
            Ok(action) => {
                record.j = Some(action.value);
                record.error_estimate = Some(action.error_estimate);
                for flag in action.flags {
                    record.push_flag(flag);
                }
            }
            Err(e) => record.push_flag(flag_for(&e)),
        }
        match oracle::period_direct(&ctx.params, &ctx.energy, &ctx.quadrature) {
            Ok(tau) => {
                record.tau = Some(tau);
                let omega = 2.0 * std::f64::consts::PI / tau;
                record.omega = Some(omega);
                record.eta = Some(ctx.params.omega0() / omega);
            }
            Err(e) => record.push_flag(flag_for(&e)),
        }
        record
    }
}

/// Hypergeometric closed-form strategy; period-only.
struct ClosedFormMethod;

impl EvalMethod for ClosedFormMethod {
    fn kind(&self) -> MethodKind {
        MethodKind::ClosedForm
    }

    fn evaluate(&self, ctx: &EvalContext) -> OutputRecord {
        let mut record = OutputRecord::empty(ctx, self.kind(), 0);
        match oracle::period_closed_form(&ctx.params, &ctx.energy) {
            Ok(tau) => {
                let omega = 2.0 * std::f64::consts::PI / tau;
                record.tau = Some(tau);
                record.omega = Some(omega);
                record.eta = Some(ctx.params.omega0() / omega);
            }
            Err(e) => record.push_flag(flag_for(&e)),
        }
        record
    }
}

/// Dynamical-simulation strategy; period-only.
struct OdeMethod;

impl EvalMethod for OdeMethod {
    fn kind(&self) -> MethodKind {
        MethodKind::Ode
    }

    fn evaluate(&self, ctx: &EvalContext) -> OutputRecord {
        let mut record = OutputRecord::empty(ctx, self.kind(), 0);
        match oracle::simulate_period_detailed(&ctx.params, &ctx.energy, &ctx.ode) {
            Ok(sim) => {
                let omega = 2.0 * std::f64::consts::PI / sim.period;
                record.tau = Some(sim.period);
                record.omega = Some(omega);
                record.eta = Some(ctx.params.omega0() / omega);
                record.error_estimate = Some(sim.error_estimate);
            }
            Err(e) => record.push_flag(flag_for(&e)),
        }
        record
    }
}

/// The registered strategies in canonical order.
pub struct MethodRegistry {
    methods: Vec<Box<dyn EvalMethod>>,
}

impl MethodRegistry {
    /// All five standard strategies: `pdx-series`, `xdp-series`,
    /// `quadrature`, `closed-form`, `ode`.
    pub fn standard() -> Self {
        Self {
            methods: vec![
                Box::new(SeriesMethod {
                    form: SeriesForm::Pdx,
                }),
                Box::new(SeriesMethod {
                    form: SeriesForm::Xdp,
                }),
                Box::new(QuadratureMethod),
                Box::new(ClosedFormMethod),
                Box::new(OdeMethod),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn EvalMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn EvalMethod> {
        self.methods.iter().map(|m| m.as_ref())
    }

    /// Evaluates every registered strategy, stamping the unvalidated-regime
    /// flag uniformly when the energy is outside the tested envelope.
    pub fn evaluate_all(&self, ctx: &EvalContext) -> Vec<OutputRecord> {
        self.iter()
            .map(|m| {
                let mut record = m.evaluate(ctx);
                if ctx.energy.epsilon() > UNVALIDATED_EPSILON {
                    record.push_flag(ResultFlag::UnvalidatedRegime);
                }
                record
            })
            .collect()
    }
}

/// A pairwise relative difference between two methods on one quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseDifference {
    pub method_a: MethodKind,
    pub method_b: MethodKind,
    pub quantity: &'static str,
    pub relative_difference: f64,
}

/// All pairwise relative differences of `J` and `omega` between records that
/// carry the quantity.
pub fn pairwise_differences(records: &[OutputRecord]) -> Vec<PairwiseDifference> {
    let mut out = Vec::new();
    for (i, a) in records.iter().enumerate() {
        for b in &records[i + 1..] {
            for (quantity, va, vb) in [("J", a.j, b.j), ("omega", a.omega, b.omega)] {
                if let (Some(x), Some(y)) = (va, vb) {
                    let scale = x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
                    out.push(PairwiseDifference {
                        method_a: a.method,
                        method_b: b.method,
                        quantity,
                        relative_difference: (x - y).abs() / scale,
                    });
                }
            }
        }
    }
    out
}

/// Whether a record participates in the agreement gate: rows flagged as
/// diverging or failed are excluded, the rest must agree.
pub fn in_agreement_gate(record: &OutputRecord) -> bool {
    record.flags.is_empty()
}
