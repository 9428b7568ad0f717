//! Batch runs: a [`RunConfig`] in, a self-describing JSON envelope out.
//!
//! Every envelope repeats the configuration and the generator parameters, so
//! a report can be regenerated from its own header. Output is deterministic:
//! parallel work is collected in order and nothing time-dependent is written.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::counterexamples::{gen_example313, prop2_stages, starred_positions, StageRecord};
use crate::density::{density_report_from, longest_ap, DensityReport, Progression, ESTIMATOR_NOTE};
use crate::dsl::{build_weights, parse_weight_spec};
use crate::error::{Error, Result};
use crate::family::FamilyProxy;
use crate::io::{geometric_schedule, parse_ball, parse_space, read_schedule_file, read_set_file};
use crate::numeric::{parse_threshold, LogValue, Threshold};
use crate::recurrence::{recurrence_scan, RecurrenceExperiment, ScanParams};
use crate::shift::{build_schedule, FiniteVector};
use crate::weights::{
    mixing_check, multiple_recurrence_check, syndetic_operator_check, CriteriaReport,
    CriterionWitness, WeightKind,
};

/// Default output directory when no explicit path is given.
pub const OUT_DIR_ENV: &str = "SHIFTLAB_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Syndetic,
    Multrec,
    Mixing,
    DirectSum,
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "syndetic" => Ok(Criterion::Syndetic),
            "multrec" => Ok(Criterion::Multrec),
            "mixing" => Ok(Criterion::Mixing),
            "direct_sum" | "dsum" => Ok(Criterion::DirectSum),
            other => Err(Error::range(format!(
                "unknown criterion '{other}' (syndetic, multrec, mixing, direct_sum)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Density {
        set: String,
        windows: Vec<u64>,
        #[serde(default)]
        window_floor: u64,
        /// Cap for the longest-progression search; skipped when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ap_max: Option<u64>,
    },
    Weights {
        spec: String,
        horizon: u64,
        criteria: Vec<Criterion>,
        thresholds: Vec<String>,
        offsets: Vec<i64>,
        /// Largest order `m` of the multiple-recurrence condition.
        order: u64,
        r: u64,
        gap: u64,
        tail_start: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        proxy: Option<FamilyProxy>,
    },
    Recur {
        spec: String,
        /// Schedule JSON; without one, `geometric` or plain `e_0` is used.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schedule: Option<String>,
        /// `(base, count)` of a geometric schedule targeting `e_0`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        geometric: Option<(u64, u32)>,
        ball: String,
        space: String,
        r: u64,
        k_max: u64,
        horizon: u64,
        window: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Density { .. } => "density",
            Command::Weights { .. } => "weights",
            Command::Recur { .. } => "recur",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    /// Not echoed, so the same run written to two places stays byte-identical.
    #[serde(skip)]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seed: 0,
            format: Format::Json,
            output: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: u64| {
            if v == 0 {
                Err(Error::range(format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        match &self.command {
            Command::Density { windows, .. } => {
                if windows.is_empty() {
                    return Err(Error::range("at least one window size is needed"));
                }
            }
            Command::Weights {
                horizon,
                criteria,
                thresholds,
                order,
                r,
                gap,
                tail_start,
                ..
            } => {
                positive("N", *horizon)?;
                positive("order", *order)?;
                positive("r", *r)?;
                positive("gap", *gap)?;
                positive("t0", *tail_start)?;
                if criteria.is_empty() || thresholds.is_empty() {
                    return Err(Error::range("criteria and M list must be non-empty"));
                }
            }
            Command::Recur {
                r,
                k_max,
                horizon,
                window,
                delta,
                ..
            } => {
                positive("r", *r)?;
                positive("K", *k_max)?;
                positive("N", *horizon)?;
                positive("s", *window)?;
                if delta.is_some_and(|d| !(d > 0.0 && d <= 1.0)) {
                    return Err(Error::range("delta must lie in (0, 1]"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorInfo {
    Prop2 {
        stages: Vec<StageRecord>,
        /// Starred positions `l·n_m` in increasing order.
        b_list: Vec<u64>,
        compensator_exponents: Vec<u64>,
    },
    Example313 {
        shifts: Vec<u64>,
        horizon: u64,
        s_cardinality: u64,
        /// Start of the first block of `S` at least 64 long.
        one_hole_start_64: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Density {
        density: DensityReport,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        longest_ap: Option<Progression>,
    },
    Criteria {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<GeneratorInfo>,
        reports: Vec<CriteriaReport>,
    },
    Recurrence(RecurrenceExperiment),
}

impl ReportBody {
    pub fn kind(&self) -> &'static str {
        match self {
            ReportBody::Density { .. } => "density",
            ReportBody::Criteria { .. } => "criteria",
            ReportBody::Recurrence(_) => "recurrence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub notes: Vec<String>,
    pub body: ReportBody,
}

impl Envelope {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

fn generator_info(kind: &WeightKind) -> Result<Option<GeneratorInfo>> {
    Ok(match kind {
        WeightKind::Prop2 { stages } => {
            let stages = prop2_stages(*stages as u64)?;
            Some(GeneratorInfo::Prop2 {
                b_list: starred_positions(&stages),
                compensator_exponents: stages.iter().map(|s| s.compensator_exponent).collect(),
                stages,
            })
        }
        _ => None,
    })
}

fn example313_for(m: u64, horizon: u64) -> Result<crate::counterexamples::Example313> {
    let exponent = 64 - horizon.max(1).saturating_sub(1).leading_zeros();
    let exponent = exponent.max(m as u32 + 2);
    gen_example313(&(1..=m).collect::<Vec<_>>(), exponent)
}

/// Resolves a generator against a requested horizon, shrinking the horizon to
/// the realized length of finite generators.
fn resolve_horizon(w: &crate::weights::WeightSequence, horizon: u64, notes: &mut Vec<String>) -> u64 {
    match w.max_index() {
        Some(max) if max < horizon => {
            notes.push(format!(
                "horizon {horizon} clamped to {max}, the realized length of {}",
                w.spec()
            ));
            max
        }
        _ => horizon,
    }
}

pub fn run(config: &RunConfig) -> Result<Envelope> {
    config.validate()?;
    let mut notes = Vec::new();
    let body = match &config.command {
        Command::Density {
            set,
            windows,
            window_floor,
            ap_max,
        } => {
            let a = read_set_file(Path::new(set))?;
            notes.push(ESTIMATOR_NOTE.to_string());
            ReportBody::Density {
                density: density_report_from(&a, windows, *window_floor)?,
                longest_ap: ap_max.map(|cap| longest_ap(&a, cap)).transpose()?,
            }
        }
        Command::Weights {
            spec,
            horizon,
            criteria,
            thresholds,
            offsets,
            order,
            r,
            gap,
            tail_start,
            proxy,
        } => {
            let kind = parse_weight_spec(spec)?;
            let w = build_weights(&kind)?;
            let n = resolve_horizon(&w, *horizon, &mut notes);
            let table = w.table(n)?;
            let ms = thresholds
                .iter()
                .map(|t| parse_threshold(t))
                .collect::<Result<Vec<Threshold>>>()?;
            let mut reports = Vec::with_capacity(criteria.len());
            for c in criteria {
                reports.push(match c {
                    Criterion::Syndetic => syndetic_operator_check(&table, &ms, *gap)?,
                    Criterion::Multrec => multiple_recurrence_check(&table, *order, &ms)?,
                    Criterion::Mixing => mixing_check(&table, &ms, (*tail_start).min(n))?,
                    Criterion::DirectSum => {
                        let proxy = proxy.clone().unwrap_or(FamilyProxy::cofinite(*tail_start));
                        crate::recurrence::direct_sum_check(&table, *r, &ms, offsets, &proxy)?
                    }
                });
            }
            let generator = match kind {
                WeightKind::Example313 { m } => {
                    let e = example313_for(m, n)?;
                    Some(GeneratorInfo::Example313 {
                        horizon: e.horizon(),
                        s_cardinality: e.s.len() as u64,
                        one_hole_start_64: e.one_hole_start(64),
                        shifts: e.shifts,
                    })
                }
                ref k => generator_info(k)?,
            };
            ReportBody::Criteria { generator, reports }
        }
        Command::Recur {
            spec,
            schedule,
            geometric,
            ball,
            space,
            r,
            k_max,
            horizon,
            window,
            delta,
        } => {
            let space = parse_space(space)?;
            let kind = parse_weight_spec(spec)?;
            let w = build_weights(&kind)?;
            let side = w.side();
            let targets = match (schedule, geometric) {
                (Some(path), _) => read_schedule_file(Path::new(path), space, side)?,
                (None, Some((base, count))) => geometric_schedule(space, side, *base, *count, 0)?,
                (None, None) => Vec::new(),
            };
            let q = parse_ball(ball, space, side)?;
            let reach = targets
                .iter()
                .filter_map(|(t, y)| y.max_index().map(|m| m + *t as i64))
                .max()
                .unwrap_or(0)
                .max(1) as u64;
            let mut table_horizon = reach.max(*horizon);
            if let Some(max) = w.max_index() {
                if max < reach {
                    return Err(Error::range(format!(
                        "schedule reaches index {reach}, beyond the realized length {max} of {spec}"
                    )));
                }
                table_horizon = resolve_horizon(&w, table_horizon, &mut notes);
            }
            let table = w.table(table_horizon)?;
            let x = if targets.is_empty() {
                notes.push("no schedule given: the orbit of e_0 is scanned".into());
                FiniteVector::basis(space, side, 0)?
            } else {
                build_schedule(&table, &targets, space)?.vector().clone()
            };
            let scaling: Option<Vec<LogValue>> = match kind {
                WeightKind::Example313 { m } => {
                    notes.push(format!(
                        "orbit points scaled by lambda_n of the dyadic-block sequence with A = [1, {m}]"
                    ));
                    Some(example313_for(m, *horizon)?.scaling())
                }
                _ => None,
            };
            let params = ScanParams {
                r: *r,
                k_max: *k_max,
                window: *window,
                delta: *delta,
            };
            notes.push("borderline orbit points are excluded from the return set".into());
            ReportBody::Recurrence(recurrence_scan(
                &table,
                &x,
                &q,
                *horizon,
                params,
                scaling.as_deref(),
            )?)
        }
    };
    Ok(Envelope {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        notes,
        body,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    /// `s, alpha_hat, ratio`.
    Density,
    /// `m, M, witness_n, min_log_product`.
    Multrec,
    /// `criterion, M, j, l, order, verdict`.
    Criteria,
    /// `k, witness_count, banach_estimate`.
    Recurrence,
}

impl PlotKind {
    /// The natural plot for a report body.
    pub fn for_body(body: &ReportBody) -> PlotKind {
        match body {
            ReportBody::Density { .. } => PlotKind::Density,
            ReportBody::Criteria { reports, .. } => {
                if reports.iter().all(|r| r.criterion == "multiple_recurrence") {
                    PlotKind::Multrec
                } else {
                    PlotKind::Criteria
                }
            }
            ReportBody::Recurrence(_) => PlotKind::Recurrence,
        }
    }

    fn expects(self) -> &'static str {
        match self {
            PlotKind::Density => "density",
            PlotKind::Multrec | PlotKind::Criteria => "criteria",
            PlotKind::Recurrence => "recurrence",
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV rows for plotting; column order is fixed per kind.
pub fn emit_plotdata(body: &ReportBody, kind: PlotKind) -> Result<String> {
    if body.kind() != kind.expects() {
        return Err(Error::KindMismatch {
            expected: kind.expects().to_string(),
            got: body.kind().to_string(),
        });
    }
    let mut out = String::new();
    match (body, kind) {
        (ReportBody::Density { density, .. }, PlotKind::Density) => {
            out.push_str("s,alpha_hat,ratio\n");
            for (s, a) in density.window_sizes.iter().zip(&density.window_max_counts) {
                out.push_str(&format!("{s},{a},{}\n", *a as f64 / *s as f64));
            }
        }
        (ReportBody::Criteria { reports, .. }, PlotKind::Multrec) => {
            out.push_str("m,M,witness_n,min_log_product\n");
            for rep in reports.iter().filter(|r| r.criterion == "multiple_recurrence") {
                for e in &rep.entries {
                    let (n, v) = match &e.witness {
                        Some(CriterionWitness::Recurrence { n, min_log2 }) => {
                            (n.to_string(), min_log2.to_f64().to_string())
                        }
                        _ => (String::new(), String::new()),
                    };
                    out.push_str(&format!("{},{},{n},{v}\n", opt(e.order), e.threshold));
                }
            }
        }
        (ReportBody::Criteria { reports, .. }, PlotKind::Criteria) => {
            out.push_str("criterion,M,j,l,order,verdict\n");
            for rep in reports {
                for e in &rep.entries {
                    let verdict = serde_json::to_value(e.verdict)?;
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        rep.criterion,
                        e.threshold,
                        opt(e.j),
                        opt(e.l),
                        opt(e.order),
                        verdict.as_str().unwrap_or_default()
                    ));
                }
            }
        }
        (ReportBody::Recurrence(exp), PlotKind::Recurrence) => {
            out.push_str("k,witness_count,banach_estimate\n");
            for r in &exp.results {
                out.push_str(&format!("{},{},{}\n", r.k, r.witness_count, r.estimate));
            }
        }
        _ => unreachable!("kind checked above"),
    }
    Ok(out)
}

/// Where a run writes: the explicit path, else `$SHIFTLAB_OUT_DIR/<command>.<ext>`,
/// else standard output (`None`).
pub fn output_path(config: &RunConfig) -> Option<PathBuf> {
    let ext = match config.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    config.output.as_ref().map(PathBuf::from).or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{}.{ext}", config.command.name())))
    })
}

/// Runs and renders in the configured format.
pub fn run_to_string(config: &RunConfig) -> Result<String> {
    let env = run(config)?;
    match config.format {
        Format::Json => env.to_json(),
        Format::Csv => emit_plotdata(&env.body, PlotKind::for_body(&env.body)),
    }
}
