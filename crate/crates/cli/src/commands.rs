//! Command implementations shared by the CLI entry point and the tests.

use serde::Serialize;

use seqent::systems::AxisAction;
use seqent::{
    correlation_profile, density, greedy_entropy_sequence, greedy_independence,
    ip_restricted_independence, se_pair_localize, seq_entropy_profile, top_seq_entropy_profile,
    Cover, EntropyProfile, EntropyUnit, Exact, FolnerSequence, NRange, Scalar, SePairOptions,
    SolverLimits, SolverMode, SubsetGenerator, SymbolicPartition, SymbolicSystem,
};

use crate::config::{ConfigError, SearchMode, SearchSpec, Settings, World};

#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Capacity(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => 1,
            CmdError::Capacity(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Capacity(m) => m,
        }
    }
}

impl From<seqent::Error> for CmdError {
    fn from(e: seqent::Error) -> Self {
        if e.is_capacity() {
            CmdError::Capacity(e.to_string())
        } else {
            CmdError::Config(e.to_string())
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Config(e.to_string())
    }
}

type CmdResult = Result<CmdOutput, CmdError>;

/// Rendered command result: the artifact body (CSV or JSON), human summary
/// lines, and the process exit code.
pub struct CmdOutput {
    pub content: String,
    pub summary: Vec<String>,
    pub exit: i32,
}

macro_rules! with_world {
    ($world:expr, |$sys:ident, $loaded:ident| $body:block) => {
        match $world {
            World::SymbolicExact($loaded) => {
                let $sys = &$loaded.sys;
                $body
            }
            World::SymbolicFloat($loaded) => {
                let $sys = &$loaded.sys;
                $body
            }
            World::RotationExact($loaded) => {
                let $sys = &$loaded.sys;
                $body
            }
            World::RotationFloat($loaded) => {
                let $sys = &$loaded.sys;
                $body
            }
        }
    };
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, CmdError> {
    value.ok_or_else(|| CmdError::Config(format!("config is missing {what}")))
}

fn profile_summary(profile: &EntropyProfile, unit: EntropyUnit) -> Vec<String> {
    let mut out = vec![format!(
        "rows: {}; tail window: last {} rows; tail_max = {} {}",
        profile.rows.len(),
        profile.rows.len() - profile.rows.len() / 2,
        seqent::profile::format_sig(unit.convert(profile.tail_max)),
        unit.label(),
    )];
    if let Some(msg) = &profile.truncation {
        out.push(format!(
            "truncated after {} rows: {msg}",
            profile.rows.len()
        ));
    }
    out
}

fn profile_exit(profile: &EntropyProfile) -> i32 {
    if profile.truncated() {
        2
    } else {
        0
    }
}

pub fn cmd_entropy_measure(world: &World, settings: &Settings) -> CmdResult {
    let subset = require(settings.subset.as_ref(), "a subset generator")?;
    let range = require(settings.n_range, "an n_range")?;
    let folner = FolnerSequence::boxes(settings.dimension);
    with_world!(world, |sys, loaded| {
        let partition = require(loaded.partition.as_ref(), "a partition")?;
        let profile =
            seq_entropy_profile(sys, partition, subset, &folner, &range, settings.budget)?;
        Ok(CmdOutput {
            content: profile.measure_csv(settings.unit),
            summary: profile_summary(&profile, settings.unit),
            exit: profile_exit(&profile),
        })
    })
}

pub fn cmd_entropy_top(world: &World, settings: &Settings) -> CmdResult {
    let subset = require(settings.subset.as_ref(), "a subset generator")?;
    let range = require(settings.n_range, "an n_range")?;
    let folner = FolnerSequence::boxes(settings.dimension);
    with_world!(world, |sys, loaded| {
        let cover = require(loaded.cover.as_ref(), "a cover")?;
        let profile = top_seq_entropy_profile(
            sys,
            cover,
            subset,
            &folner,
            &range,
            settings.budget,
            settings.solver,
            &SolverLimits::default(),
        )?;
        Ok(CmdOutput {
            content: profile.top_csv(settings.unit, settings.solver.label()),
            summary: profile_summary(&profile, settings.unit),
            exit: profile_exit(&profile),
        })
    })
}

pub fn cmd_density(settings: &Settings) -> CmdResult {
    let subset = require(settings.subset.as_ref(), "a subset generator")?;
    let range = require(settings.n_range, "an n_range")?;
    let folner = FolnerSequence::boxes(settings.dimension);
    let estimate = density(subset, &folner, range.end)?;
    let mut content = String::from("n,members,box_size,ratio\n");
    for row in &estimate.rows {
        content.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            row.members,
            row.box_size,
            seqent::profile::format_sig(row.ratio)
        ));
    }
    let summary = vec![format!(
        "density window n in [{}, {}]: lower = {}, upper = {}",
        estimate.window.0,
        estimate.window.1,
        seqent::profile::format_sig(estimate.lower),
        seqent::profile::format_sig(estimate.upper),
    )];
    Ok(CmdOutput {
        content,
        summary,
        exit: 0,
    })
}

#[derive(Serialize)]
struct SearchReport<S: Serialize> {
    schema: u32,
    mode: &'static str,
    exact_arithmetic: bool,
    budget: u64,
    system: serde_json::Value,
    result: S,
}

/// Echo the system descriptor in its config JSON form.
fn system_value(world: &World) -> serde_json::Value {
    fn weights_json<T: Scalar>(exact: bool, values: &[T]) -> serde_json::Value {
        if exact {
            serde_json::Value::Array(
                values
                    .iter()
                    .map(|v| serde_json::Value::String(v.to_string()))
                    .collect(),
            )
        } else {
            serde_json::Value::Array(
                values
                    .iter()
                    .map(|v| serde_json::json!(v.to_f64()))
                    .collect(),
            )
        }
    }
    fn symbolic<T: Scalar>(
        sys: &SymbolicSystem<T>,
        exact: bool,
        dimension: usize,
    ) -> serde_json::Value {
        serde_json::json!({
            "kind": "symbolic",
            "alphabet": sys.alphabet(),
            "dimension": dimension,
            "weights": weights_json(exact, sys.weights()),
            "axes": sys.axes(),
        })
    }
    fn rotation<T: Scalar>(sys: &seqent::RotationSystem<T>, exact: bool) -> serde_json::Value {
        serde_json::json!({
            "kind": "rotation",
            "angles": weights_json(exact, sys.angles()),
        })
    }
    match world {
        World::SymbolicExact(l) => symbolic(&l.sys, true, l.sys.dimension()),
        World::SymbolicFloat(l) => symbolic(&l.sys, false, l.sys.dimension()),
        World::RotationExact(l) => rotation(&l.sys, true),
        World::RotationFloat(l) => rotation(&l.sys, false),
    }
}

fn render_report<S: Serialize>(
    mode: &'static str,
    world: &World,
    budget: u64,
    result: S,
) -> Result<String, CmdError> {
    let report = SearchReport {
        schema: 1,
        mode,
        exact_arithmetic: world.exact(),
        budget,
        system: system_value(world),
        result,
    };
    serde_json::to_string_pretty(&report)
        .map(|s| s + "\n")
        .map_err(|e| CmdError::Config(format!("report serialization failed: {e}")))
}

pub fn cmd_search(world: &World, settings: &Settings) -> CmdResult {
    let spec: &SearchSpec = require(settings.search.as_ref(), "a search block")?;
    match spec.mode {
        SearchMode::Independence => cmd_search_independence(world, settings, spec),
        SearchMode::EntropySequence => cmd_search_entropy_sequence(world, settings, spec),
        SearchMode::Correlation => cmd_search_correlation(world, settings, spec),
        SearchMode::SePairs => cmd_search_se_pairs(world, settings, spec),
    }
}

fn cmd_search_independence(world: &World, settings: &Settings, spec: &SearchSpec) -> CmdResult {
    with_world!(world, |sys, loaded| {
        if loaded.sets.len() < 2 {
            return Err(CmdError::Config(
                "independence search needs at least two disjoint sets in search.sets".into(),
            ));
        }
        let witness = match &spec.pool {
            SubsetGenerator::IpInitialSegment { generators } => {
                ip_restricted_independence(sys, &loaded.sets, spec.k, generators, settings.budget)?
            }
            pool => {
                let elements = pool.enumerate(spec.pool_size)?;
                greedy_independence(sys, &loaded.sets, spec.k, &elements, settings.budget)?
            }
        };
        let summary = vec![format!(
            "independence witness: length {} of target {}, verified = {}, complete = {}",
            witness.elements.len(),
            witness.target,
            witness.verified,
            witness.complete,
        )];
        let content = render_report("independence", world, settings.budget, &witness)?;
        Ok(CmdOutput {
            content,
            summary,
            exit: 0,
        })
    })
}

fn cmd_search_entropy_sequence(world: &World, settings: &Settings, spec: &SearchSpec) -> CmdResult {
    with_world!(world, |sys, loaded| {
        let partition = require(loaded.partition.as_ref(), "a partition")?;
        let pool = spec.pool.enumerate(spec.pool_size)?;
        let seq = greedy_entropy_sequence(sys, partition, spec.k, &pool, settings.budget)?;
        let summary = vec![format!(
            "entropy sequence: {} steps, first gain = {}, last gain = {}",
            seq.gains.len(),
            seqent::profile::format_sig(settings.unit.convert(*seq.gains.first().unwrap_or(&0.0))),
            seqent::profile::format_sig(settings.unit.convert(*seq.gains.last().unwrap_or(&0.0))),
        )];
        let content = render_report("entropy-sequence", world, settings.budget, &seq)?;
        Ok(CmdOutput {
            content,
            summary,
            exit: 0,
        })
    })
}

fn cmd_search_correlation(world: &World, settings: &Settings, _spec: &SearchSpec) -> CmdResult {
    let range = require(settings.n_range, "an n_range")?;
    let folner = FolnerSequence::boxes(settings.dimension);
    with_world!(world, |sys, loaded| {
        if loaded.sets.len() != 2 {
            return Err(CmdError::Config(
                "correlation mode needs exactly two sets in search.sets".into(),
            ));
        }
        let rows = correlation_profile(
            sys,
            &loaded.sets[0],
            &loaded.sets[1],
            &folner,
            &range,
            settings.budget,
        )?;
        let last = rows.last().map(|r| r.average).unwrap_or(0.0);
        let summary = vec![format!(
            "correlation rows: {}; final Cesaro average = {}",
            rows.len(),
            seqent::profile::format_sig(last),
        )];
        let content = render_report("correlation", world, settings.budget, &rows)?;
        Ok(CmdOutput {
            content,
            summary,
            exit: 0,
        })
    })
}

fn cmd_search_se_pairs(world: &World, settings: &Settings, spec: &SearchSpec) -> CmdResult {
    with_world!(world, |sys, loaded| {
        let cover = require(loaded.cover.as_ref(), "a cover")?;
        let opts = SePairOptions {
            depth: spec.depth,
            evidence_length: spec.evidence_length,
            pool: spec.pool.enumerate(spec.pool_size)?,
            threshold: spec.threshold,
            budget: settings.budget,
        };
        let report = se_pair_localize(sys, cover, &opts)?;
        let summary = vec![format!(
            "se-pair localization: conclusive = {}, levels = {}{}",
            report.conclusive,
            report.levels.len(),
            report
                .failed_level
                .map(|l| format!(", failed at level {l}"))
                .unwrap_or_default(),
        )];
        let content = render_report("se-pairs", world, settings.budget, &report)?;
        Ok(CmdOutput {
            content,
            summary,
            exit: 0,
        })
    })
}

/// The packaged reproduction: the `Z^2` system with one identity axis and
/// one shift axis over two symbols with the uniform product measure.
/// Emits all four finite-scale quantities and fails (exit 1) when any row
/// deviates from its closed-form value by more than 1e-9 nats.
pub fn cmd_reproduce_example61(unit: EntropyUnit, budget: u64) -> CmdResult {
    let half = Exact::from_ratio(1, 2);
    let sys = SymbolicSystem::<Exact>::new(
        2,
        2,
        vec![half.clone(), half],
        vec![AxisAction::Identity, AxisAction::Shift],
    )?;
    let alpha = SymbolicPartition::generating(2, 2);
    let cover = Cover::new(vec![
        seqent::CylinderUnion::single(seqent::CylinderPattern::at(
            seqent::GroupElement::new(vec![0, 0]),
            0,
        )),
        seqent::CylinderUnion::single(seqent::CylinderPattern::at(
            seqent::GroupElement::new(vec![0, 0]),
            1,
        )),
    ])?;
    let folner = FolnerSequence::boxes(2);
    let column = SubsetGenerator::AxisRay {
        dimension: 2,
        axis: 1,
        start: 1,
    };
    let boxes = SubsetGenerator::DensityOneComplement {
        dimension: 2,
        excluded: vec![],
    };
    let column_range = NRange::new(1, 8);
    let box_range = NRange::new(1, 4);

    let measure_column =
        seq_entropy_profile(&sys, &alpha, &column, &folner, &column_range, budget)?;
    let measure_boxes = seq_entropy_profile(&sys, &alpha, &boxes, &folner, &box_range, budget)?;
    let limits = SolverLimits::default();
    let top_column = top_seq_entropy_profile(
        &sys,
        &cover,
        &column,
        &folner,
        &column_range,
        budget,
        SolverMode::Exact,
        &limits,
    )?;
    let top_boxes = top_seq_entropy_profile(
        &sys,
        &cover,
        &boxes,
        &folner,
        &box_range,
        budget,
        SolverMode::Exact,
        &limits,
    )?;

    for p in [&measure_column, &measure_boxes, &top_column, &top_boxes] {
        if let Some(msg) = &p.truncation {
            return Err(CmdError::Capacity(format!(
                "reproduction truncated after {} rows: {msg}",
                p.rows.len()
            )));
        }
    }

    let ln2 = std::f64::consts::LN_2;
    let mut content = String::from("quantity,n,count,value,expected,delta\n");
    let mut max_delta = 0.0f64;
    let mut emit = |name: &str, profile: &EntropyProfile, expected: &dyn Fn(u32) -> f64| {
        for row in &profile.rows {
            let expect = expected(row.n);
            let delta = row.normalized - expect;
            max_delta = max_delta.max(delta.abs());
            content.push_str(&format!(
                "{name},{},{},{},{},{}\n",
                row.n,
                row.count,
                seqent::profile::format_sig(unit.convert(row.normalized)),
                seqent::profile::format_sig(unit.convert(expect)),
                seqent::profile::format_sig(unit.convert(delta)),
            ));
        }
    };
    emit("measure_column", &measure_column, &|_| ln2);
    emit("measure_boxes", &measure_boxes, &|n| ln2 / f64::from(n));
    emit("top_column", &top_column, &|_| ln2);
    emit("top_boxes", &top_boxes, &|n| ln2 / f64::from(n));

    let pass = max_delta <= 1e-9;
    let summary = vec![
        format!(
            "column rows ({} measure, {} topological): sequence entropy log 2 = {} {}",
            measure_column.rows.len(),
            top_column.rows.len(),
            seqent::profile::format_sig(unit.convert(ln2)),
            unit.label(),
        ),
        format!(
            "box rows ({} measure, {} topological): entropy (log 2)/n, tending to zero",
            measure_boxes.rows.len(),
            top_boxes.rows.len(),
        ),
        format!(
            "max |delta| = {:.3e} nats: {}",
            max_delta,
            if pass { "PASS" } else { "FAIL" }
        ),
    ];
    Ok(CmdOutput {
        content,
        summary,
        exit: if pass { 0 } else { 1 },
    })
}
