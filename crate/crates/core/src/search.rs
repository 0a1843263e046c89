//! Constructive procedures behind the mixing characterizations: greedy
//! independence-sequence search (with an IP-restricted rebuild variant),
//! conditional-entropy-maximizing sequence construction, Cesàro correlation
//! profiles, and sequence-entropy-pair localization by complement halving.
//!
//! Every output is finite-scale evidence: the searched statements quantify
//! over all `n` and all neighborhoods, and nothing here claims the infinite
//! statement.

use serde::Serialize;

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::group::{ip_initial_segment, FolnerSequence, GroupElement, SubsetGenerator};
use crate::profile::NRange;
use crate::scalar::{Kahan, Scalar};
use crate::systems::{DynamicalSystem, PointRep};

/// Result of the greedy independence search: an ordered witness `S` such
/// that every choice of one target set per element of `S` has nonempty
/// intersection of translates, verified exactly on the carrier.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceWitness {
    pub elements: Vec<GroupElement>,
    pub target: usize,
    /// All `l^{|S|}` intersections were checked nonempty.
    pub verified: bool,
    /// The witness reached the target length before the pool ran out.
    pub complete: bool,
    /// IP level used, for the IP-restricted variant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ip_level: Option<usize>,
}

/// Greedily extend `S` by the first pool element keeping all label
/// combinations nonempty. An exhausted pool returns the verified prefix
/// flagged incomplete; that is evidence of (not proof of) non-weak-mixing.
pub fn greedy_independence<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    sets: &[S::Region],
    target: usize,
    pool: &[GroupElement],
    budget: u64,
) -> Result<IndependenceWitness> {
    if sets.len() < 2 {
        return Err(Error::invalid("independence search needs at least two sets"));
    }
    if target == 0 {
        return Err(Error::invalid("independence target must be >= 1"));
    }
    let zero = GroupElement::zero(sys.dimension());
    for (i, s) in sets.iter().enumerate() {
        if sys.region_is_empty(s) {
            return Err(Error::invalid(format!("target set {i} is empty")));
        }
        for other in sets.iter().skip(i + 1) {
            if sys.regions_intersect(&[(zero.clone(), s), (zero.clone(), other)], budget)? {
                return Err(Error::invalid(
                    "target sets are not pairwise disjoint on the carrier",
                ));
            }
        }
    }
    let l = sets.len();
    let mut chosen: Vec<GroupElement> = Vec::new();
    'extend: while chosen.len() < target {
        'pool: for g in pool {
            if chosen.contains(g) {
                continue;
            }
            // Check all l^{k+1} combinations over chosen + g.
            let k = chosen.len() + 1;
            let mut digits = vec![0usize; k];
            loop {
                let items: Vec<(GroupElement, &S::Region)> = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| {
                        let elem = if i < chosen.len() { &chosen[i] } else { g };
                        (elem.clone(), &sets[d])
                    })
                    .collect();
                if !sys.regions_intersect(&items, budget)? {
                    continue 'pool;
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        // All combinations nonempty: accept g.
                        chosen.push(g.clone());
                        continue 'extend;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < l {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        }
        // Pool exhausted before the target length.
        let len = chosen.len();
        return Ok(IndependenceWitness {
            elements: chosen,
            target,
            verified: len > 0,
            complete: false,
            ip_level: None,
        });
    }
    Ok(IndependenceWitness {
        elements: chosen,
        target,
        verified: true,
        complete: true,
        ip_level: None,
    })
}

/// IP-restricted variant: the witness is rebuilt from scratch per IP level,
/// with the pool equal to the initial segment `FP(p_1..p_level)`. Returns
/// the first complete witness, or the best prefix over all levels.
pub fn ip_restricted_independence<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    sets: &[S::Region],
    target: usize,
    generators: &[GroupElement],
    budget: u64,
) -> Result<IndependenceWitness> {
    if generators.is_empty() {
        return Err(Error::invalid("IP search needs at least one generator"));
    }
    let mut best: Option<IndependenceWitness> = None;
    for level in 1..=generators.len() {
        let segment = ip_initial_segment(generators, level)?;
        let mut pool: Vec<GroupElement> = segment.iter().cloned().collect();
        pool.sort_by_key(|g| (g.max_coord(), g.clone()));
        let mut witness = greedy_independence(sys, sets, target, &pool, budget)?;
        witness.ip_level = Some(level);
        if witness.complete {
            return Ok(witness);
        }
        if best
            .as_ref()
            .is_none_or(|b| witness.elements.len() > b.elements.len())
        {
            best = Some(witness);
        }
    }
    Ok(best.expect("at least one level ran"))
}

/// Ordered sequence with per-step conditional-entropy gains
/// `H(g^{-1}α | ⋁ previous)`; by the chain rule the running average of the
/// gains equals the normalized joint entropy along the constructed set.
#[derive(Clone, Debug, Serialize)]
pub struct EntropySequence {
    pub elements: Vec<GroupElement>,
    pub gains: Vec<f64>,
}

pub fn greedy_entropy_sequence<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    partition: &S::Partition,
    k: usize,
    pool: &[GroupElement],
    budget: u64,
) -> Result<EntropySequence> {
    if k == 0 {
        return Err(Error::invalid("sequence length must be >= 1"));
    }
    let mut chosen: Vec<GroupElement> = Vec::new();
    let mut gains: Vec<f64> = Vec::new();
    let mut joint_prev = 0.0f64;
    for _ in 0..k {
        let mut best: Option<(f64, f64, &GroupElement)> = None;
        for g in pool {
            if chosen.contains(g) {
                continue;
            }
            let items: Vec<(GroupElement, &S::Partition)> = chosen
                .iter()
                .chain(std::iter::once(g))
                .map(|e| (e.clone(), partition))
                .collect();
            let joint = sys.join_distribution(&items, budget)?.entropy();
            let gain = joint - joint_prev;
            if best.is_none_or(|(bg, _, _)| gain > bg + 1e-12) {
                best = Some((gain, joint, g));
            }
        }
        match best {
            Some((gain, joint, g)) => {
                chosen.push(g.clone());
                gains.push(gain.max(0.0));
                joint_prev = joint;
            }
            None => break,
        }
    }
    Ok(EntropySequence {
        elements: chosen,
        gains,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationRow {
    pub n: u32,
    pub average: f64,
}

/// Cesàro profile of absolute correlation deviations
/// `(1/|F_n|) Σ_{g ∈ F_n} |μ(A ∩ g^{-1}B) - μ(A)μ(B)|`.
pub fn correlation_profile<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    a: &S::Region,
    b: &S::Region,
    folner: &FolnerSequence,
    range: &NRange,
    budget: u64,
) -> Result<Vec<CorrelationRow>> {
    range.validate()?;
    let mu_a = sys.region_measure(a, budget)?;
    let mu_b = sys.region_measure(b, budget)?;
    let product = mu_a * mu_b;
    let full = folner.set(range.end)?;
    let mut deviations: Vec<(GroupElement, f64)> = Vec::with_capacity(full.len());
    for g in full.iter() {
        let joint = sys.translated_intersection_measure(a, g, b, budget)?;
        let dev = (joint - product.clone()).to_f64().abs();
        deviations.push((g.clone(), dev));
    }
    let lookup: std::collections::BTreeMap<&GroupElement, f64> =
        deviations.iter().map(|(g, d)| (g, *d)).collect();
    let mut rows = Vec::new();
    for n in range.start..=range.end {
        let box_n = folner.set(n)?;
        let mut acc = Kahan::default();
        for g in box_n.iter() {
            acc.add(lookup[g]);
        }
        rows.push(CorrelationRow {
            n,
            average: acc.total() / box_n.len() as f64,
        });
    }
    Ok(rows)
}

/// One refinement level of the localization: the two complement sets, their
/// diameters, and the evidence that the induced standard cover still has a
/// positive finite-scale profile.
#[derive(Clone, Debug, Serialize)]
pub struct SePairLevel {
    pub level: u32,
    pub complement_a: String,
    pub complement_b: String,
    pub diameter_a: f64,
    pub diameter_b: f64,
    pub witness_length: usize,
    pub profile_normalized: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SePairReport {
    pub conclusive: bool,
    pub levels: Vec<SePairLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(PointRep, PointRep)>,
    /// Level at which no candidate retained a positive profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_level: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SePairOptions {
    pub depth: u32,
    /// Independence length demanded as positive-profile evidence.
    pub evidence_length: usize,
    pub pool: Vec<GroupElement>,
    /// Normalized-profile threshold the evidence must reach.
    pub threshold: f64,
    pub budget: u64,
}

/// Localize a sequence-entropy-pair candidate from a standard cover by the
/// halving construction: cover each complement with half-diameter balls,
/// keep the first ball whose induced coarser cover retains a positive
/// finite-scale profile, and recurse to the requested depth.
pub fn se_pair_localize<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    cover: &Cover<S::Region>,
    opts: &SePairOptions,
) -> Result<SePairReport> {
    if !cover.is_standard() {
        return Err(Error::invalid("pair localization needs a standard (2-set) cover"));
    }
    crate::cover::verify_cover(sys, cover, opts.budget)?;
    let mut comp_a = sys.region_complement(&cover.elements()[0], opts.budget)?;
    let mut comp_b = sys.region_complement(&cover.elements()[1], opts.budget)?;
    if sys.region_is_empty(&comp_a) || sys.region_is_empty(&comp_b) {
        return Err(Error::invalid(
            "a cover element already covers the whole carrier; nothing to localize",
        ));
    }
    let mut levels = Vec::new();
    let mut failed_level = None;

    let evidence = |ca: &S::Region, cb: &S::Region| -> Result<Option<(usize, f64)>> {
        let witness = greedy_independence(
            sys,
            &[ca.clone(), cb.clone()],
            opts.evidence_length,
            &opts.pool,
            opts.budget,
        )?;
        if !witness.complete {
            return Ok(None);
        }
        let normalized = witness_profile_value(sys, ca, cb, &witness.elements, opts.budget)?;
        if normalized >= opts.threshold {
            Ok(Some((witness.elements.len(), normalized)))
        } else {
            Ok(None)
        }
    };

    match evidence(&comp_a, &comp_b)? {
        Some((len, value)) => levels.push(SePairLevel {
            level: 0,
            complement_a: sys.region_summary(&comp_a),
            complement_b: sys.region_summary(&comp_b),
            diameter_a: sys.region_diameter(&comp_a),
            diameter_b: sys.region_diameter(&comp_b),
            witness_length: len,
            profile_normalized: value,
        }),
        None => {
            return Ok(SePairReport {
                conclusive: false,
                levels,
                pair: None,
                failed_level: Some(0),
            })
        }
    }

    'levels: for level in 1..=opts.depth {
        let mut advanced = (None, None);
        for candidate in sys.halving_candidates(&comp_a, opts.budget)? {
            if sys.region_is_empty(&candidate) {
                continue;
            }
            if evidence(&candidate, &comp_b)?.is_some() {
                advanced.0 = Some(candidate);
                break;
            }
        }
        let next_a = match advanced.0 {
            Some(c) => c,
            None => {
                failed_level = Some(level);
                break 'levels;
            }
        };
        for candidate in sys.halving_candidates(&comp_b, opts.budget)? {
            if sys.region_is_empty(&candidate) {
                continue;
            }
            if evidence(&next_a, &candidate)?.is_some() {
                advanced.1 = Some(candidate);
                break;
            }
        }
        let next_b = match advanced.1 {
            Some(c) => c,
            None => {
                failed_level = Some(level);
                break 'levels;
            }
        };
        comp_a = next_a;
        comp_b = next_b;
        let (len, value) = evidence(&comp_a, &comp_b)?
            .expect("evidence held when the candidates were accepted");
        levels.push(SePairLevel {
            level,
            complement_a: sys.region_summary(&comp_a),
            complement_b: sys.region_summary(&comp_b),
            diameter_a: sys.region_diameter(&comp_a),
            diameter_b: sys.region_diameter(&comp_b),
            witness_length: len,
            profile_normalized: value,
        });
    }

    let conclusive = failed_level.is_none();
    let pair = Some((sys.region_point(&comp_a)?, sys.region_point(&comp_b)?));
    Ok(SePairReport {
        conclusive,
        levels,
        pair,
        failed_level,
    })
}

/// Normalized topological profile value of the standard cover
/// `{X \ C_a, X \ C_b}` along the witness elements.
///
/// For a two-element cover, a join element `⋂ g^{-1}(X \ C_{s'(g)})` can
/// cover a nonempty intersection `⋂ g^{-1}C_{s(g)}` only when `s'` differs
/// from `s` at every position, i.e. for the single complementary pattern.
/// So `N(join) >= #\{s nonempty\}`, with equality when every pattern
/// survives (the join has at most `2^k` elements). Counting the nonempty
/// patterns therefore gives the exact value `log 2` for a verified
/// witness, and an exact lower bound otherwise.
fn witness_profile_value<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    comp_a: &S::Region,
    comp_b: &S::Region,
    witness: &[GroupElement],
    budget: u64,
) -> Result<f64> {
    let k = witness.len();
    if k > 24 {
        return Err(Error::capacity(format!(
            "profile evidence over {k} witness elements would check 2^{k} combinations"
        )));
    }
    let sets = [comp_a, comp_b];
    let mut nonempty = 0u64;
    for mask in 0u64..(1u64 << k) {
        let items: Vec<(GroupElement, &S::Region)> = witness
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), sets[((mask >> i) & 1) as usize]))
            .collect();
        if sys.regions_intersect(&items, budget)? {
            nonempty += 1;
        }
    }
    if nonempty == 0 {
        return Ok(0.0);
    }
    Ok((nonempty as f64).ln() / k as f64)
}

/// Convenience: the first `m` canonical pool elements of a generator.
pub fn pool_from_generator(generator: &SubsetGenerator, m: usize) -> Result<Vec<GroupElement>> {
    generator.enumerate(m)
}
