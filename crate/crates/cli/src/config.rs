//! JSON run configuration: parsing, validation, and construction of the
//! typed world the commands run against.
//!
//! Numeric literals may be JSON numbers (floating-point backend) or strings
//! like `"1/2"` / `"0.3"` (exact rationals). When every literal in the
//! configuration is exact, the whole run uses exact arithmetic.

use std::marker::PhantomData;

use num_bigint::BigInt;
use serde::Deserialize;

use seqent::circle::ArcSet;
use seqent::systems::{AxisAction, CylinderPattern, CylinderUnion, DynamicalSystem};
use seqent::{
    CirclePartition, Cover, EntropyUnit, Exact, GroupElement, NRange, RotationSystem, Scalar,
    SolverMode, SubsetGenerator, SymbolicPartition, SymbolicSystem, DEFAULT_BUDGET,
};

/// Environment variable consulted for the default enumeration budget.
pub const BUDGET_ENV: &str = "SEQENT_BUDGET";

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = std::result::Result<T, ConfigError>;

fn cerr<T>(msg: impl Into<String>) -> CResult<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum NumberLit {
    Text(String),
    Float(f64),
}

impl NumberLit {
    /// Exact value, when the literal is a rational or decimal string.
    pub fn as_exact(&self) -> Option<Exact> {
        match self {
            NumberLit::Float(_) => None,
            NumberLit::Text(s) => parse_exact(s),
        }
    }

    pub fn as_f64(&self) -> CResult<f64> {
        match self {
            NumberLit::Float(v) => Ok(*v),
            NumberLit::Text(s) => match parse_exact(s) {
                Some(q) => Ok(q.to_f64()),
                None => cerr(format!("cannot parse number literal {s:?}")),
            },
        }
    }
}

fn parse_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Exact::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numerator: BigInt = if digits.is_empty() {
        BigInt::from(0)
    } else {
        digits.parse().ok()?
    };
    let denominator = BigInt::from(10).pow(frac_part.len() as u32);
    Some(Exact::new(BigInt::from(sign) * numerator, denominator))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub schema: u32,
    pub system: RawSystem,
    #[serde(default)]
    pub partition: Option<RawPartition>,
    #[serde(default)]
    pub cover: Option<RawCover>,
    #[serde(default)]
    pub subset: Option<SubsetGenerator>,
    #[serde(default)]
    pub folner: Option<RawFolner>,
    #[serde(default)]
    pub n_range: Option<RawRange>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub unit: Option<EntropyUnit>,
    #[serde(default)]
    pub solver: Option<SolverMode>,
    #[serde(default)]
    pub search: Option<RawSearch>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawSystem {
    Symbolic {
        alphabet: usize,
        dimension: usize,
        weights: Vec<NumberLit>,
        axes: Vec<AxisAction>,
    },
    Rotation {
        angles: Vec<NumberLit>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawPartition {
    Generating,
    SymbolicWindow {
        window: Vec<Vec<i64>>,
        labels: Vec<u32>,
    },
    Circle {
        breakpoints: Vec<NumberLit>,
        labels: Vec<u32>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCover {
    pub elements: Vec<RawRegion>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRegion {
    #[serde(default)]
    pub cylinders: Option<Vec<RawCylinder>>,
    #[serde(default)]
    pub arcs: Option<Vec<[NumberLit; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCylinder {
    pub coords: Vec<Vec<i64>>,
    pub letters: Vec<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFolner {
    pub kind: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRange {
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSearch {
    pub mode: String,
    #[serde(default)]
    pub sets: Option<Vec<RawRegion>>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub pool: Option<SubsetGenerator>,
    #[serde(default)]
    pub pool_size: Option<usize>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub evidence_length: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Independence,
    EntropySequence,
    SePairs,
    Correlation,
}

pub const SEARCH_MODES: &[(&str, SearchMode)] = &[
    ("independence", SearchMode::Independence),
    ("entropy-sequence", SearchMode::EntropySequence),
    ("se-pairs", SearchMode::SePairs),
    ("correlation", SearchMode::Correlation),
];

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub mode: SearchMode,
    pub k: usize,
    pub pool: SubsetGenerator,
    pub pool_size: usize,
    pub depth: u32,
    pub threshold: f64,
    pub evidence_length: usize,
}

/// Scalar-independent run settings.
#[derive(Clone, Debug)]
pub struct Settings {
    pub subset: Option<SubsetGenerator>,
    pub dimension: usize,
    pub n_range: Option<NRange>,
    pub budget: u64,
    pub unit: EntropyUnit,
    pub solver: SolverMode,
    pub search: Option<SearchSpec>,
}

/// Typed world: one concrete system with its matching descriptors.
pub struct Loaded<T: Scalar, S: DynamicalSystem<T>> {
    pub sys: S,
    pub partition: Option<S::Partition>,
    pub cover: Option<Cover<S::Region>>,
    pub sets: Vec<S::Region>,
    pub _scalar: PhantomData<T>,
}

pub enum World {
    SymbolicExact(Loaded<Exact, SymbolicSystem<Exact>>),
    SymbolicFloat(Loaded<f64, SymbolicSystem<f64>>),
    RotationExact(Loaded<Exact, RotationSystem<Exact>>),
    RotationFloat(Loaded<f64, RotationSystem<f64>>),
}

impl World {
    pub fn exact(&self) -> bool {
        matches!(self, World::SymbolicExact(_) | World::RotationExact(_))
    }
}

/// Flag-level overrides applied on top of the file configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub unit: Option<EntropyUnit>,
    pub budget: Option<u64>,
}

pub fn load(path: &std::path::Path, overrides: &Overrides) -> CResult<(World, Settings)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    let raw: RawConfig = serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
    build(raw, overrides)
}

pub fn build(raw: RawConfig, overrides: &Overrides) -> CResult<(World, Settings)> {
    if raw.schema != 1 {
        return cerr(format!("unsupported schema version {}", raw.schema));
    }
    if let Some(f) = &raw.folner {
        if f.kind != "boxes" {
            return cerr(format!(
                "unknown Folner kind {:?}; supported kinds: boxes",
                f.kind
            ));
        }
    }

    let exact = is_exact(&raw);
    let dimension = match &raw.system {
        RawSystem::Symbolic { dimension, .. } => *dimension,
        RawSystem::Rotation { angles } => angles.len(),
    };

    if let Some(subset) = &raw.subset {
        subset
            .validate()
            .map_err(|e| ConfigError(e.to_string()))?;
        if subset.dimension() != dimension {
            return cerr(format!(
                "subset dimension {} does not match system dimension {dimension}",
                subset.dimension()
            ));
        }
    }

    let search = match &raw.search {
        None => None,
        Some(rs) => Some(build_search(rs, dimension)?),
    };

    let env_budget = std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse::<u64>().ok());
    let budget = overrides
        .budget
        .or(raw.budget)
        .or(env_budget)
        .unwrap_or(DEFAULT_BUDGET);

    let settings = Settings {
        subset: raw.subset.clone(),
        dimension,
        n_range: raw.n_range.as_ref().map(|r| NRange::new(r.start, r.end)),
        budget,
        unit: overrides.unit.or(raw.unit).unwrap_or(EntropyUnit::Nats),
        solver: raw.solver.unwrap_or(SolverMode::Exact),
        search,
    };

    let world = match (&raw.system, exact) {
        (RawSystem::Symbolic { .. }, true) => {
            World::SymbolicExact(build_symbolic::<Exact>(&raw, &exact_parser)?)
        }
        (RawSystem::Symbolic { .. }, false) => {
            World::SymbolicFloat(build_symbolic::<f64>(&raw, &float_parser)?)
        }
        (RawSystem::Rotation { .. }, true) => {
            World::RotationExact(build_rotation::<Exact>(&raw, &exact_parser)?)
        }
        (RawSystem::Rotation { .. }, false) => {
            World::RotationFloat(build_rotation::<f64>(&raw, &float_parser)?)
        }
    };
    Ok((world, settings))
}

fn build_search(rs: &RawSearch, dimension: usize) -> CResult<SearchSpec> {
    let mode = match SEARCH_MODES.iter().find(|(name, _)| *name == rs.mode) {
        Some((_, m)) => *m,
        None => {
            let valid: Vec<&str> = SEARCH_MODES.iter().map(|(n, _)| *n).collect();
            return cerr(format!(
                "unknown search mode {:?}; valid modes: {}",
                rs.mode,
                valid.join(", ")
            ));
        }
    };
    let pool = match &rs.pool {
        Some(p) => {
            p.validate().map_err(|e| ConfigError(e.to_string()))?;
            if p.dimension() != dimension {
                return cerr(format!(
                    "pool dimension {} does not match system dimension {dimension}",
                    p.dimension()
                ));
            }
            p.clone()
        }
        None => SubsetGenerator::DensityOneComplement {
            dimension,
            excluded: vec![],
        },
    };
    Ok(SearchSpec {
        mode,
        k: rs.k.unwrap_or(6),
        pool,
        pool_size: rs.pool_size.unwrap_or(64),
        depth: rs.depth.unwrap_or(2),
        threshold: rs.threshold.unwrap_or(0.05),
        evidence_length: rs.evidence_length.unwrap_or(5),
    })
}

fn is_exact(raw: &RawConfig) -> bool {
    let mut lits: Vec<&NumberLit> = Vec::new();
    match &raw.system {
        RawSystem::Symbolic { weights, .. } => lits.extend(weights.iter()),
        RawSystem::Rotation { angles } => lits.extend(angles.iter()),
    }
    if let Some(RawPartition::Circle { breakpoints, .. }) = &raw.partition {
        lits.extend(breakpoints.iter());
    }
    let mut regions: Vec<&RawRegion> = Vec::new();
    if let Some(c) = &raw.cover {
        regions.extend(c.elements.iter());
    }
    if let Some(s) = &raw.search {
        if let Some(sets) = &s.sets {
            regions.extend(sets.iter());
        }
    }
    for r in regions {
        if let Some(arcs) = &r.arcs {
            for [a, b] in arcs {
                lits.push(a);
                lits.push(b);
            }
        }
    }
    lits.iter().all(|l| l.as_exact().is_some())
}

fn exact_parser(lit: &NumberLit) -> CResult<Exact> {
    lit.as_exact()
        .ok_or_else(|| ConfigError("internal: exact parse after exactness check".into()))
}

fn float_parser(lit: &NumberLit) -> CResult<f64> {
    lit.as_f64()
}

fn build_symbolic<T: Scalar>(
    raw: &RawConfig,
    parse: &dyn Fn(&NumberLit) -> CResult<T>,
) -> CResult<Loaded<T, SymbolicSystem<T>>> {
    let (alphabet, dimension, weights, axes) = match &raw.system {
        RawSystem::Symbolic {
            alphabet,
            dimension,
            weights,
            axes,
        } => (*alphabet, *dimension, weights, axes),
        _ => unreachable!(),
    };
    let weights = weights.iter().map(parse).collect::<CResult<Vec<T>>>()?;
    let sys = SymbolicSystem::new(alphabet, dimension, weights, axes.clone())
        .map_err(|e| ConfigError(e.to_string()))?;

    let partition = match &raw.partition {
        None => None,
        Some(RawPartition::Generating) => Some(SymbolicPartition::generating(alphabet, dimension)),
        Some(RawPartition::SymbolicWindow { window, labels }) => {
            let window = window
                .iter()
                .map(|c| check_dim(c, dimension))
                .collect::<CResult<Vec<_>>>()?;
            Some(
                SymbolicPartition::new(alphabet, window, labels.clone())
                    .map_err(|e| ConfigError(e.to_string()))?,
            )
        }
        Some(RawPartition::Circle { .. }) => {
            return cerr("circle partition given for a symbolic system")
        }
    };

    let to_region = |r: &RawRegion| -> CResult<CylinderUnion> {
        if r.arcs.is_some() {
            return cerr("arc region given for a symbolic system");
        }
        let cylinders = match &r.cylinders {
            Some(c) if !c.is_empty() => c,
            _ => return cerr("symbolic region needs a nonempty cylinders list"),
        };
        let patterns = cylinders
            .iter()
            .map(|c| {
                if c.coords.len() != c.letters.len() {
                    return cerr(format!(
                        "cylinder has {} coords but {} letters",
                        c.coords.len(),
                        c.letters.len()
                    ));
                }
                let constraints = c
                    .coords
                    .iter()
                    .map(|coord| check_dim(coord, dimension))
                    .collect::<CResult<Vec<_>>>()?
                    .into_iter()
                    .zip(c.letters.iter().copied())
                    .collect();
                CylinderPattern::new(constraints).map_err(|e| ConfigError(e.to_string()))
            })
            .collect::<CResult<Vec<_>>>()?;
        Ok(CylinderUnion::new(patterns))
    };

    let cover = build_cover(&raw.cover, &to_region)?;
    let sets = build_sets(&raw.search, &to_region)?;
    Ok(Loaded {
        sys,
        partition,
        cover,
        sets,
        _scalar: PhantomData,
    })
}

fn build_rotation<T: Scalar>(
    raw: &RawConfig,
    parse: &dyn Fn(&NumberLit) -> CResult<T>,
) -> CResult<Loaded<T, RotationSystem<T>>> {
    let angles = match &raw.system {
        RawSystem::Rotation { angles } => angles.iter().map(parse).collect::<CResult<Vec<T>>>()?,
        _ => unreachable!(),
    };
    let sys = RotationSystem::new(angles).map_err(|e| ConfigError(e.to_string()))?;

    let partition = match &raw.partition {
        None => None,
        Some(RawPartition::Circle {
            breakpoints,
            labels,
        }) => {
            let bps = breakpoints.iter().map(parse).collect::<CResult<Vec<T>>>()?;
            Some(
                CirclePartition::new(bps, labels.clone())
                    .map_err(|e| ConfigError(e.to_string()))?,
            )
        }
        Some(_) => return cerr("symbolic partition given for a rotation system"),
    };

    let to_region = |r: &RawRegion| -> CResult<ArcSet<T>> {
        if r.cylinders.is_some() {
            return cerr("cylinder region given for a rotation system");
        }
        let arcs = match &r.arcs {
            Some(a) if !a.is_empty() => a,
            _ => return cerr("rotation region needs a nonempty arcs list"),
        };
        let pairs = arcs
            .iter()
            .map(|[s, e]| Ok((parse(s)?, parse(e)?)))
            .collect::<CResult<Vec<_>>>()?;
        ArcSet::from_endpoint_pairs(&pairs).map_err(|e| ConfigError(e.to_string()))
    };

    let cover = build_cover(&raw.cover, &to_region)?;
    let sets = build_sets(&raw.search, &to_region)?;
    Ok(Loaded {
        sys,
        partition,
        cover,
        sets,
        _scalar: PhantomData,
    })
}

fn build_cover<R>(
    raw: &Option<RawCover>,
    to_region: &dyn Fn(&RawRegion) -> CResult<R>,
) -> CResult<Option<Cover<R>>> {
    match raw {
        None => Ok(None),
        Some(c) => {
            let elements = c.elements.iter().map(to_region).collect::<CResult<Vec<R>>>()?;
            Ok(Some(
                Cover::new(elements).map_err(|e| ConfigError(e.to_string()))?,
            ))
        }
    }
}

fn build_sets<R>(
    raw: &Option<RawSearch>,
    to_region: &dyn Fn(&RawRegion) -> CResult<R>,
) -> CResult<Vec<R>> {
    match raw.as_ref().and_then(|s| s.sets.as_ref()) {
        None => Ok(Vec::new()),
        Some(sets) => sets.iter().map(to_region).collect(),
    }
}

fn check_dim(coords: &[i64], dimension: usize) -> CResult<GroupElement> {
    if coords.len() != dimension {
        return cerr(format!(
            "coordinate {coords:?} has dimension {}, system has {dimension}",
            coords.len()
        ));
    }
    Ok(GroupElement::new(coords.to_vec()))
}
