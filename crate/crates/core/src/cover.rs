//! Open covers, refinement joins, exact minimal subcovers `N(·)`,
//! topological sequence entropy profiles, and hitting-time sets `N(U, V)`.
//!
//! All subcover computations run on the finite atom carrier (configurations
//! on a window, or elementary arcs), where they are exact for cylinder and
//! arc covers. The join of translated covers is expanded incrementally,
//! keeping one representative per distinct atom set and discarding
//! dominated elements, which preserves the minimal subcover cardinality.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroupSet, FolnerSequence, GroupElement, SubsetGenerator};
use crate::profile::{compute_rows, EntropyProfile, NRange, ProfileRow};
use crate::scalar::Scalar;
use crate::systems::DynamicalSystem;

/// A finite open cover: a list of region elements whose union is `X`
/// (verified on the atom carrier by [`verify_cover`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Cover<R> {
    elements: Vec<R>,
}

impl<R> Cover<R> {
    pub fn new(elements: Vec<R>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("cover has no elements"));
        }
        Ok(Cover { elements })
    }

    pub fn elements(&self) -> &[R] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Standard covers have exactly two elements.
    pub fn is_standard(&self) -> bool {
        self.elements.len() == 2
    }
}

/// Atom carrier incidence: for each translated cover element, the set of
/// atoms it contains. Elements are grouped by translate.
#[derive(Clone, Debug)]
pub struct AtomIncidence {
    atom_count: usize,
    elements: Vec<FixedBitSet>,
    group_bounds: Vec<usize>,
}

impl AtomIncidence {
    pub fn new(atom_count: usize) -> Self {
        AtomIncidence {
            atom_count,
            elements: Vec::new(),
            group_bounds: vec![0],
        }
    }

    pub fn single_group(atom_count: usize, elements: Vec<FixedBitSet>) -> Self {
        let bounds = vec![0, elements.len()];
        AtomIncidence {
            atom_count,
            elements,
            group_bounds: bounds,
        }
    }

    pub fn push_group(&mut self, group: Vec<FixedBitSet>) {
        self.elements.extend(group);
        self.group_bounds.push(self.elements.len());
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn elements(&self) -> &[FixedBitSet] {
        &self.elements
    }

    pub fn group_count(&self) -> usize {
        self.group_bounds.len() - 1
    }

    pub fn group(&self, idx: usize) -> &[FixedBitSet] {
        &self.elements[self.group_bounds[idx]..self.group_bounds[idx + 1]]
    }

    /// True when the union of all elements is the whole carrier.
    pub fn covers_carrier(&self) -> bool {
        let mut union = FixedBitSet::with_capacity(self.atom_count);
        for e in &self.elements {
            union.union_with(e);
        }
        union.count_ones(..) == self.atom_count
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMode {
    Exact,
    Greedy,
}

impl SolverMode {
    pub fn label(&self) -> &'static str {
        match self {
            SolverMode::Exact => "exact",
            SolverMode::Greedy => "greedy",
        }
    }
}

/// Budgets for the exact branch-and-bound solver. `free_elements` caps the
/// undetermined elements left after the reduction fixpoint.
#[derive(Clone, Copy, Debug)]
pub struct SolverLimits {
    pub free_elements: usize,
    pub nodes: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            free_elements: 30,
            nodes: 2_000_000,
        }
    }
}

/// Flags from the cover definitions: `standard` (exactly two elements),
/// `non_trivial` (no element dense), `admissible` (each element owns part
/// of the space), all checked on the atom carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFlags {
    pub standard: bool,
    pub non_trivial: bool,
    pub admissible: bool,
}

/// Atom incidence of the untranslated cover.
fn identity_incidence<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    cover: &Cover<S::Region>,
    budget: u64,
) -> Result<AtomIncidence> {
    let zero = GroupElement::zero(sys.dimension());
    sys.cover_atoms(&[(zero, cover.elements())], budget)
}

/// Verify the cover property (union of elements = X) on the atom carrier.
pub fn verify_cover<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    cover: &Cover<S::Region>,
    budget: u64,
) -> Result<()> {
    let inc = identity_incidence(sys, cover, budget)?;
    if !inc.covers_carrier() {
        return Err(Error::invalid(
            "cover elements do not cover the space (checked on the atom carrier)",
        ));
    }
    Ok(())
}

pub fn cover_flags<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    cover: &Cover<S::Region>,
    budget: u64,
) -> Result<CoverFlags> {
    verify_cover(sys, cover, budget)?;
    let inc = identity_incidence(sys, cover, budget)?;
    let atoms = inc.atom_count();
    let elements = inc.elements();
    let non_trivial = elements.iter().all(|e| e.count_ones(..) < atoms);
    let mut admissible = true;
    for (i, e) in elements.iter().enumerate() {
        let mut private = e.clone();
        for (j, other) in elements.iter().enumerate() {
            if i != j {
                private.difference_with(other);
            }
        }
        if private.count_ones(..) == 0 {
            admissible = false;
            break;
        }
    }
    Ok(CoverFlags {
        standard: cover.is_standard(),
        non_trivial,
        admissible,
    })
}

/// Expand the join cover `⋁_g g^{-1}U` over the grouped incidence into the
/// atom sets of its elements: intersections of one element per group,
/// deduplicated; dominated (subset) elements are dropped, which cannot
/// change the minimal subcover cardinality.
pub fn join_cover_elements(inc: &AtomIncidence, cap: usize) -> Result<Vec<FixedBitSet>> {
    const DOMINANCE_CAP: usize = 4096;
    let mut full = FixedBitSet::with_capacity(inc.atom_count());
    full.insert_range(..);
    let mut sets = vec![full];
    for group_idx in 0..inc.group_count() {
        let group = inc.group(group_idx);
        let mut next: Vec<FixedBitSet> = Vec::new();
        let mut seen: std::collections::HashSet<FixedBitSet> = std::collections::HashSet::new();
        for base in &sets {
            for element in group {
                let mut inter = base.clone();
                inter.intersect_with(element);
                if inter.count_ones(..) == 0 {
                    continue;
                }
                if seen.insert(inter.clone()) {
                    next.push(inter);
                }
            }
        }
        if next.len() <= DOMINANCE_CAP {
            next = prune_dominated(next);
        }
        if next.len() > cap {
            return Err(Error::capacity(format!(
                "join expansion produced {} distinct elements, cap is {cap}",
                next.len()
            )));
        }
        if next.is_empty() {
            return Err(Error::invalid(
                "join of covers is empty; the inputs do not cover the carrier",
            ));
        }
        sets = next;
    }
    Ok(sets)
}

/// Keep only set-maximal elements (order preserved).
fn prune_dominated(sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    let mut keep = vec![true; sets.len()];
    for i in 0..sets.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..sets.len() {
            if i == j || !keep[j] {
                continue;
            }
            // Sets are deduplicated, so subset means proper subset.
            if sets[i].is_subset(&sets[j]) {
                keep[i] = false;
                break;
            }
        }
    }
    sets.into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

/// Minimal subcover cardinality of the elements in `inc` over its carrier.
///
/// Exact mode reduces first (essential atoms force their unique element,
/// dominated elements and dominated atoms drop) and then branch-and-bounds
/// the residue; it refuses instances whose residue exceeds the
/// `free_elements` budget rather than returning a greedy answer.
pub fn min_subcover(inc: &AtomIncidence, mode: SolverMode, limits: &SolverLimits) -> Result<usize> {
    if !inc.covers_carrier() {
        return Err(Error::invalid(
            "subcover requested for elements that do not cover the carrier",
        ));
    }
    match mode {
        SolverMode::Greedy => Ok(greedy_cover_count(inc.atom_count(), inc.elements())),
        SolverMode::Exact => exact_cover_count(inc.atom_count(), inc.elements(), limits),
    }
}

fn greedy_cover_count(atom_count: usize, elements: &[FixedBitSet]) -> usize {
    let mut covered = FixedBitSet::with_capacity(atom_count);
    let mut count = 0usize;
    while covered.count_ones(..) < atom_count {
        let mut best_gain = 0usize;
        let mut best_idx = usize::MAX;
        for (i, e) in elements.iter().enumerate() {
            let gain = e.difference(&covered).count();
            if gain > best_gain {
                best_gain = gain;
                best_idx = i;
            }
        }
        debug_assert_ne!(best_idx, usize::MAX);
        covered.union_with(&elements[best_idx]);
        count += 1;
    }
    count
}

fn exact_cover_count(
    atom_count: usize,
    elements: &[FixedBitSet],
    limits: &SolverLimits,
) -> Result<usize> {
    let mut live_sets: Vec<FixedBitSet> = elements.to_vec();
    let mut live_atoms = FixedBitSet::with_capacity(atom_count);
    live_atoms.insert_range(..);
    let mut forced = 0usize;

    loop {
        let mut changed = false;

        // Essential atoms: a uniquely covered atom forces its element.
        let mut forced_elems: Vec<usize> = Vec::new();
        for atom in live_atoms.ones() {
            let mut covering = None;
            let mut count = 0;
            for (i, s) in live_sets.iter().enumerate() {
                if s.contains(atom) {
                    covering = Some(i);
                    count += 1;
                    if count > 1 {
                        break;
                    }
                }
            }
            match (count, covering) {
                (0, _) => {
                    return Err(Error::invalid(
                        "atom lost all covering elements during reduction",
                    ))
                }
                (1, Some(i)) if !forced_elems.contains(&i) => forced_elems.push(i),
                _ => {}
            }
        }
        if !forced_elems.is_empty() {
            forced_elems.sort_unstable();
            for &i in forced_elems.iter().rev() {
                let set = live_sets.remove(i);
                live_atoms.difference_with(&set);
                forced += 1;
            }
            changed = true;
        }
        if live_atoms.count_ones(..) == 0 {
            return Ok(forced);
        }

        // Restrict to live atoms; drop empties.
        for s in &mut live_sets {
            s.intersect_with(&live_atoms);
        }
        let before = live_sets.len();
        live_sets.retain(|s| s.count_ones(..) > 0);
        if live_sets.len() != before {
            changed = true;
        }

        // Dominated elements: drop subsets (keep the first of equal sets).
        let mut keep = vec![true; live_sets.len()];
        for i in 0..live_sets.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..live_sets.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if live_sets[i].is_subset(&live_sets[j])
                    && (live_sets[i] != live_sets[j] || j < i)
                {
                    keep[i] = false;
                    changed = true;
                    break;
                }
            }
        }
        if keep.iter().any(|&k| !k) {
            live_sets = live_sets
                .into_iter()
                .zip(&keep)
                .filter_map(|(s, &k)| k.then_some(s))
                .collect();
        }

        // Dominated atoms: if every element covering b also covers a, then
        // covering b covers a for free, so a can be dropped.
        let atoms: Vec<usize> = live_atoms.ones().collect();
        let mut covers: Vec<FixedBitSet> = Vec::with_capacity(atoms.len());
        for &a in &atoms {
            let mut c = FixedBitSet::with_capacity(live_sets.len());
            for (i, s) in live_sets.iter().enumerate() {
                if s.contains(a) {
                    c.insert(i);
                }
            }
            covers.push(c);
        }
        for x in 0..atoms.len() {
            if !live_atoms.contains(atoms[x]) {
                continue;
            }
            for y in 0..atoms.len() {
                if x == y || !live_atoms.contains(atoms[y]) {
                    continue;
                }
                if covers[y].is_subset(&covers[x]) && (covers[x] != covers[y] || y < x) {
                    live_atoms.set(atoms[x], false);
                    changed = true;
                    break;
                }
            }
        }

        if !changed {
            break;
        }
    }

    let free = live_sets.len();
    if free > limits.free_elements {
        return Err(Error::ExactBudget {
            free,
            limit: limits.free_elements,
        });
    }

    // Remap residual atoms to a compact range.
    let atoms: Vec<usize> = live_atoms.ones().collect();
    let compact = |s: &FixedBitSet| {
        let mut c = FixedBitSet::with_capacity(atoms.len());
        for (new, &old) in atoms.iter().enumerate() {
            if s.contains(old) {
                c.insert(new);
            }
        }
        c
    };
    let sets: Vec<FixedBitSet> = live_sets.iter().map(compact).collect();
    let n_atoms = atoms.len();

    let mut best = greedy_cover_count(n_atoms, &sets);
    let mut nodes = 0u64;
    let mut covered = FixedBitSet::with_capacity(n_atoms);
    branch(&sets, n_atoms, &mut covered, 0, &mut best, &mut nodes, limits)?;
    Ok(forced + best)
}

/// Admissible lower bound: greedily pick uncovered atoms whose candidate
/// elements are pairwise disjoint in atom space; each needs its own pick.
fn disjoint_atom_bound(sets: &[FixedBitSet], n_atoms: usize, covered: &FixedBitSet) -> usize {
    let mut blocked = covered.clone();
    let mut bound = 0usize;
    for atom in 0..n_atoms {
        if blocked.contains(atom) {
            continue;
        }
        bound += 1;
        for s in sets {
            if s.contains(atom) {
                blocked.union_with(s);
            }
        }
    }
    bound
}

fn branch(
    sets: &[FixedBitSet],
    n_atoms: usize,
    covered: &mut FixedBitSet,
    used: usize,
    best: &mut usize,
    nodes: &mut u64,
    limits: &SolverLimits,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limits.nodes {
        return Err(Error::capacity(format!(
            "branch-and-bound exceeded {} nodes",
            limits.nodes
        )));
    }
    if covered.count_ones(..) == n_atoms {
        *best = (*best).min(used);
        return Ok(());
    }
    if used + disjoint_atom_bound(sets, n_atoms, covered) >= *best {
        return Ok(());
    }
    // Branch on the uncovered atom with the fewest candidates.
    let mut branch_atom = usize::MAX;
    let mut branch_count = usize::MAX;
    for atom in 0..n_atoms {
        if covered.contains(atom) {
            continue;
        }
        let count = sets.iter().filter(|s| s.contains(atom)).count();
        if count < branch_count {
            branch_count = count;
            branch_atom = atom;
        }
    }
    let mut candidates: Vec<usize> = (0..sets.len())
        .filter(|&i| sets[i].contains(branch_atom))
        .collect();
    candidates.sort_by_key(|&i| std::cmp::Reverse(sets[i].difference(covered).count()));
    for i in candidates {
        let saved = covered.clone();
        covered.union_with(&sets[i]);
        branch(sets, n_atoms, covered, used + 1, best, nodes, limits)?;
        *covered = saved;
    }
    Ok(())
}

/// Finite-scale topological sequence entropy profile: per row, the exact
/// minimal subcover count `N(⋁_{g ∈ S ∩ F_n} g^{-1}U)`, `log N`, and the
/// normalization by `|S ∩ F_n|`.
#[allow(clippy::too_many_arguments)]
pub fn top_seq_entropy_profile<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    cover: &Cover<S::Region>,
    subset: &SubsetGenerator,
    folner: &FolnerSequence,
    range: &NRange,
    budget: u64,
    mode: SolverMode,
    limits: &SolverLimits,
) -> Result<EntropyProfile> {
    range.validate()?;
    subset.validate()?;
    verify_cover(sys, cover, budget)?;
    let cap = usize::try_from(budget).unwrap_or(usize::MAX).min(1 << 20);
    compute_rows(range, |n| {
        let gens = subset.intersect_folner(folner, n)?;
        if gens.is_empty() {
            return Ok(None);
        }
        let translates: Vec<(GroupElement, &[S::Region])> = gens
            .iter()
            .map(|g| (g.clone(), cover.elements()))
            .collect();
        let inc = sys.cover_atoms(&translates, budget)?;
        let joined = join_cover_elements(&inc, cap)?;
        let joined_inc = AtomIncidence::single_group(inc.atom_count(), joined);
        let n_join = min_subcover(&joined_inc, mode, limits)?;
        let count = gens.len() as u64;
        let joint = (n_join as f64).ln();
        Ok(Some(ProfileRow {
            n,
            count,
            joint,
            normalized: joint / count as f64,
            cover_count: Some(n_join as u64),
        }))
    })
}

/// Hitting times restricted to a box: `{g ∈ F_n : U ∩ g^{-1}V ≠ ∅}`.
pub fn hitting_times<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    u: &S::Region,
    v: &S::Region,
    folner: &FolnerSequence,
    n: u32,
    budget: u64,
) -> Result<FiniteGroupSet> {
    let zero = GroupElement::zero(sys.dimension());
    let mut hits = Vec::new();
    for g in folner.set(n)?.iter() {
        if sys.regions_intersect(&[(zero.clone(), u), (g.clone(), v)], budget)? {
            hits.push(g.clone());
        }
    }
    Ok(FiniteGroupSet::from_vec(hits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(atom_count: usize, ones: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(atom_count);
        for &i in ones {
            b.insert(i);
        }
        b
    }

    #[test]
    fn single_full_element_needs_one() {
        let inc = AtomIncidence::single_group(4, vec![bits(4, &[0, 1, 2, 3])]);
        assert_eq!(
            min_subcover(&inc, SolverMode::Exact, &SolverLimits::default()).unwrap(),
            1
        );
    }

    #[test]
    fn singletons_are_all_forced() {
        let elements: Vec<FixedBitSet> = (0..5).map(|i| bits(5, &[i])).collect();
        let inc = AtomIncidence::single_group(5, elements);
        assert_eq!(
            min_subcover(&inc, SolverMode::Exact, &SolverLimits::default()).unwrap(),
            5
        );
        assert_eq!(
            min_subcover(&inc, SolverMode::Greedy, &SolverLimits::default()).unwrap(),
            5
        );
    }

    #[test]
    fn non_cover_is_rejected() {
        let inc = AtomIncidence::single_group(3, vec![bits(3, &[0, 1])]);
        assert!(min_subcover(&inc, SolverMode::Exact, &SolverLimits::default()).is_err());
    }

    #[test]
    fn exact_beats_or_ties_greedy_on_the_classic_trap() {
        // Universe {0..5}; greedy picks the size-3 middle set first and needs
        // 3 sets, the optimum is 2.
        let elements = vec![
            bits(6, &[0, 1, 2]),
            bits(6, &[3, 4, 5]),
            bits(6, &[1, 2, 3, 4]),
        ];
        let inc = AtomIncidence::single_group(6, elements);
        let exact = min_subcover(&inc, SolverMode::Exact, &SolverLimits::default()).unwrap();
        let greedy = min_subcover(&inc, SolverMode::Greedy, &SolverLimits::default()).unwrap();
        assert_eq!(exact, 2);
        assert!(exact <= greedy);
    }

    #[test]
    fn exact_budget_is_an_error_not_a_fallback() {
        // 40 random-ish elements, none dominated: an antichain of pairs
        // plus their complements over 40 atoms stays irreducible.
        let n = 40;
        let mut elements = Vec::new();
        for i in 0..n {
            elements.push(bits(n, &[i, (i + 1) % n]));
        }
        let inc = AtomIncidence::single_group(n, elements);
        let limits = SolverLimits {
            free_elements: 10,
            nodes: 1_000,
        };
        match min_subcover(&inc, SolverMode::Exact, &limits) {
            Err(Error::ExactBudget { free, limit }) => {
                assert!(free > limit);
            }
            other => panic!("expected ExactBudget, got {other:?}"),
        }
        assert!(min_subcover(&inc, SolverMode::Greedy, &limits).is_ok());
    }

    #[test]
    fn join_expansion_keeps_maximal_antichain() {
        // Two groups of two elements; one intersection dominates another.
        let g1 = vec![bits(4, &[0, 1, 2, 3]), bits(4, &[0, 1])];
        let g2 = vec![bits(4, &[0, 1, 2]), bits(4, &[2, 3])];
        let mut inc = AtomIncidence::new(4);
        inc.push_group(g1);
        inc.push_group(g2);
        let joined = join_cover_elements(&inc, 1 << 20).unwrap();
        // {0,1,2}, {2,3}, {0,1} survive; {0,1} from the second base is
        // dominated by {0,1,2}.
        assert_eq!(joined.len(), 2);
        assert!(joined.contains(&bits(4, &[0, 1, 2])));
        assert!(joined.contains(&bits(4, &[2, 3])));
    }
}
