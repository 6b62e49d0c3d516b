//! Monomial ideals and the resolution constructors: the full Taylor complex,
//! its pivot subcomplexes, Lyubeznik matchings, and general discrete-Morse
//! reductions.
//!
//! All constructors return certified [`BasedComplex`] values (multigraded
//! entries, differentials squaring to zero). Which subcomplexes are actually
//! resolutions is decided separately, either by the gap criterion
//! ([`is_pivot_resolution`]) or by the exactness oracle
//! ([`crate::complex::is_resolution`]); the two are compared in tests, never
//! assumed to agree.

use std::collections::{BTreeSet, HashMap};

use crate::arith::{Multidegree, Polynomial, Rational};
use crate::combin::{binomial, sign_elem, subsets_with_cardinality, IndexSet, MAX_INDEX};
use crate::complex::{minimalize, BasedComplex, BasisLabel, PolyMatrix};
use crate::error::{Error, Result};

/// Resource budgets for the exponential-size constructions. Cell counts
/// bound every power-set enumeration (2^q cells); path counts bound
/// gradient-path searches.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_cells: u64,
    pub max_paths: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 1 << 20,
            max_paths: 1_000_000,
        }
    }
}

impl Limits {
    fn check_cells(&self, q: usize) -> Result<()> {
        let needed = 1u128 << q;
        if needed > u128::from(self.max_cells) {
            Err(Error::CellLimit {
                needed,
                limit: u128::from(self.max_cells),
            })
        } else {
            Ok(())
        }
    }
}

/// A monomial ideal given by an ordered minimal generating set.
///
/// Generators are indexed 1..=q to match the index sets labeling cells; the
/// order is significant (it fixes signs, bases, and the meaning of every
/// index appearing in results).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Multidegree>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, generators: Vec<Multidegree>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        if generators.len() > MAX_INDEX {
            return Err(Error::InvalidArgument(format!(
                "{} generators exceed the supported maximum of {MAX_INDEX}",
                generators.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    left: nvars,
                    right: g.nvars(),
                });
            }
            if g.is_zero() {
                return Err(Error::UnitGenerator { index: i + 1 });
            }
        }
        for i in 0..generators.len() {
            for j in 0..generators.len() {
                if i != j && generators[i].divides(&generators[j])? {
                    return Err(Error::NonMinimalGenerators {
                        divisor: i + 1,
                        multiple: j + 1,
                    });
                }
            }
        }
        Ok(MonomialIdeal { nvars, generators })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Generator by 1-based index, matching index-set labels.
    pub fn generator(&self, index: usize) -> &Multidegree {
        assert!(
            index >= 1 && index <= self.generators.len(),
            "generator index {index} out of range 1..={}",
            self.generators.len()
        );
        &self.generators[index - 1]
    }

    /// All generators as a 0-based slice (element `i-1` is generator `i`).
    pub fn generators(&self) -> &[Multidegree] {
        &self.generators
    }

    /// The lcm multidegree m_A of the generators indexed by `set`; the empty
    /// set yields the zero multidegree (the monomial 1).
    pub fn lcm_of(&self, set: IndexSet) -> Multidegree {
        let mut acc = Multidegree::zero(self.nvars);
        for i in set.iter() {
            acc = acc
                .lcm(self.generator(i))
                .expect("generators share the variable count");
        }
        acc
    }
}

/// Builds the restriction of the Taylor complex to a downward-closed family
/// of cells (all of 𝒫([q]) for the full Taylor resolution). The filter must
/// be closed under taking subsets so that differentials stay inside.
/// Drops empty top degrees: a complex ends at its last nonzero module, so
/// a filtered cell family that kills every top-cardinality cell must not
/// leave rank-0 tail degrees (and their 0-column differentials) behind.
fn trim_trailing_empty(bases: &mut Vec<Vec<BasisLabel>>, diffs: &mut Vec<PolyMatrix>) {
    while bases.len() > 1 && bases.last().is_some_and(Vec::is_empty) {
        bases.pop();
        diffs.pop();
    }
}

fn taylor_subcomplex<F>(ideal: &MonomialIdeal, filter: F, limits: &Limits) -> Result<BasedComplex>
where
    F: Fn(IndexSet) -> bool,
{
    let q = ideal.num_generators();
    limits.check_cells(q)?;

    let mut bases: Vec<Vec<BasisLabel>> = Vec::with_capacity(q + 1);
    let mut positions: Vec<HashMap<IndexSet, usize>> = Vec::with_capacity(q + 1);
    for t in 0..=q {
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for cell in subsets_with_cardinality(q, t) {
            if !filter(cell) {
                continue;
            }
            index.insert(cell, labels.len());
            labels.push(BasisLabel {
                cell,
                degree: ideal.lcm_of(cell),
            });
        }
        bases.push(labels);
        positions.push(index);
    }

    let mut diffs = Vec::with_capacity(q);
    for t in 1..=q {
        let mut d = PolyMatrix::zero(bases[t - 1].len(), bases[t].len());
        for (col, label) in bases[t].iter().enumerate() {
            for j in label.cell.iter() {
                let face = label.cell.without(j);
                let Some(&row) = positions[t - 1].get(&face) else {
                    return Err(Error::Structural(format!(
                        "cell family is not closed under subsets: {} kept but {} dropped",
                        label.cell, face
                    )));
                };
                let shift = label
                    .degree
                    .quotient(&bases[t - 1][row].degree)
                    .expect("face lcm divides cell lcm");
                let sign = sign_elem(j, face);
                d.set(row, col, Polynomial::term(shift, Rational::from_integer(sign.into())));
            }
        }
        diffs.push(d);
    }

    trim_trailing_empty(&mut bases, &mut diffs);
    BasedComplex::new(ideal.nvars(), bases, diffs)
}

/// The Taylor resolution: basis all of 𝒫([q]), differential
/// `∂ε_τ = Σ_{j∈τ} sign(j, τ∖j) · (m_τ/m_{τ∖j}) · ε_{τ∖j}`.
pub fn taylor_resolution(ideal: &MonomialIdeal) -> Result<BasedComplex> {
    taylor_resolution_with_limits(ideal, &Limits::default())
}

pub fn taylor_resolution_with_limits(
    ideal: &MonomialIdeal,
    limits: &Limits,
) -> Result<BasedComplex> {
    taylor_subcomplex(ideal, |_| true, limits)
}

/// The pivot complex for `S`: the Taylor subcomplex on cells that do not
/// contain `S`. Requires `|S| >= 2` and `S ⊆ [q]`.
pub fn pivot_complex(ideal: &MonomialIdeal, pivot_set: IndexSet) -> Result<BasedComplex> {
    pivot_complex_with_limits(ideal, pivot_set, &Limits::default())
}

pub fn pivot_complex_with_limits(
    ideal: &MonomialIdeal,
    pivot_set: IndexSet,
    limits: &Limits,
) -> Result<BasedComplex> {
    validate_pivot_set(ideal, pivot_set)?;
    taylor_subcomplex(ideal, |cell| !cell.is_superset_of(pivot_set), limits)
}

fn validate_pivot_set(ideal: &MonomialIdeal, pivot_set: IndexSet) -> Result<()> {
    if pivot_set.len() < 2 {
        return Err(Error::InvalidPivotSet {
            reason: format!("{pivot_set} has fewer than two indices"),
        });
    }
    let ground = IndexSet::full(ideal.num_generators());
    if !pivot_set.is_subset_of(ground) {
        return Err(Error::InvalidPivotSet {
            reason: format!(
                "{pivot_set} is not contained in {{1,...,{}}}",
                ideal.num_generators()
            ),
        });
    }
    Ok(())
}

/// All gaps of `tau`: indices `h ∉ τ` whose generator divides m_τ. The
/// equivalent characterization m_τ = m_{τ∪h} is asserted as a cross-check.
pub fn find_gaps(ideal: &MonomialIdeal, tau: IndexSet) -> IndexSet {
    let q = ideal.num_generators();
    assert!(
        tau.is_subset_of(IndexSet::full(q)),
        "cell {tau} is not a subset of {{1,...,{q}}}"
    );
    let m_tau = ideal.lcm_of(tau);
    let mut gaps = IndexSet::EMPTY;
    for h in 1..=q {
        if tau.contains(h) {
            continue;
        }
        if ideal
            .generator(h)
            .divides(&m_tau)
            .expect("generators share the variable count")
        {
            assert_eq!(
                ideal.lcm_of(tau.with(h)),
                m_tau,
                "gap characterizations disagree at h={h}, tau={tau}"
            );
            gaps = gaps.with(h);
        }
    }
    gaps
}

/// Gap criterion: the pivot complex for `S` is a resolution exactly when `S`
/// has a gap.
pub fn is_pivot_resolution(ideal: &MonomialIdeal, pivot_set: IndexSet) -> Result<bool> {
    validate_pivot_set(ideal, pivot_set)?;
    Ok(!find_gaps(ideal, pivot_set).is_empty())
}

/// The smallest cardinality at which two distinct index sets share an lcm
/// (the second set may have any cardinality); infinite when all 2^q lcms
/// are distinct, which happens exactly when the Taylor resolution is
/// already minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScarfNumber {
    Finite(usize),
    Infinite,
}

impl ScarfNumber {
    pub fn as_finite(self) -> Option<usize> {
        match self {
            ScarfNumber::Finite(t) => Some(t),
            ScarfNumber::Infinite => None,
        }
    }
}

impl std::fmt::Display for ScarfNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScarfNumber::Finite(t) => write!(f, "{t}"),
            ScarfNumber::Infinite => write!(f, "infinity"),
        }
    }
}

pub fn scarf_number(ideal: &MonomialIdeal) -> Result<ScarfNumber> {
    scarf_number_with_limits(ideal, &Limits::default())
}

pub fn scarf_number_with_limits(ideal: &MonomialIdeal, limits: &Limits) -> Result<ScarfNumber> {
    let q = ideal.num_generators();
    limits.check_cells(q)?;
    // Group all 2^q subsets by lcm; a class with at least two members makes
    // its smallest member size a candidate.
    let mut classes: HashMap<Multidegree, (usize, usize)> = HashMap::new();
    for mask in 0..(1u64 << q) {
        let cell = IndexSet::from_mask(mask);
        let entry = classes
            .entry(ideal.lcm_of(cell))
            .or_insert((usize::MAX, 0));
        entry.0 = entry.0.min(cell.len());
        entry.1 += 1;
    }
    let best = classes
        .values()
        .filter(|(_, count)| *count >= 2)
        .map(|(min_size, _)| *min_size)
        .min();
    Ok(match best {
        Some(t) => ScarfNumber::Finite(t),
        None => ScarfNumber::Infinite,
    })
}

/// The lexicographically least index set of size `scarf_number` that has a
/// gap; `None` when the Scarf number is infinite (the Taylor resolution is
/// minimal and no proper pivot set is needed).
pub fn smallest_pivot_indices(ideal: &MonomialIdeal) -> Result<Option<IndexSet>> {
    smallest_pivot_indices_with_limits(ideal, &Limits::default())
}

pub fn smallest_pivot_indices_with_limits(
    ideal: &MonomialIdeal,
    limits: &Limits,
) -> Result<Option<IndexSet>> {
    let ScarfNumber::Finite(size) = scarf_number_with_limits(ideal, limits)? else {
        return Ok(None);
    };
    let q = ideal.num_generators();
    let mut candidates = subsets_with_cardinality(q, size);
    candidates.sort_by_key(|s| s.elements());
    for s in candidates {
        if !find_gaps(ideal, s).is_empty() {
            return Ok(Some(s));
        }
    }
    Err(Error::Structural(format!(
        "no index set of the Scarf cardinality {size} has a gap; \
         this contradicts the gap-existence theorem"
    )))
}

/// Rank of the pivot complex in homological degree `i` for `q` generators
/// and `|S| = l`: `binom(q, i) − binom(q−l, i−l)`, out-of-range binomials
/// evaluating to zero.
pub fn pivot_rank_formula(q: usize, l: usize, i: usize) -> u128 {
    assert!((2..=q).contains(&l), "pivot size {l} outside 2..={q}");
    binomial(q as i64, i as i64) - binomial(q as i64 - l as i64, i as i64 - l as i64)
}

/// Whether the quotient by the ideal has a minimal pivot resolution: with
/// finite Scarf number l, exactly when the Betti numbers match the pivot
/// rank formula at l; with infinite Scarf number the (minimal) Taylor
/// resolution itself qualifies.
pub fn has_minimal_pivot(ideal: &MonomialIdeal) -> Result<bool> {
    has_minimal_pivot_with_limits(ideal, &Limits::default())
}

pub fn has_minimal_pivot_with_limits(ideal: &MonomialIdeal, limits: &Limits) -> Result<bool> {
    let scarf = scarf_number_with_limits(ideal, limits)?;
    let ScarfNumber::Finite(l) = scarf else {
        return Ok(true);
    };
    let q = ideal.num_generators();
    let taylor = taylor_resolution_with_limits(ideal, limits)?;
    let (_, betti) = minimalize(&taylor)?;
    for i in 0..=q {
        let actual = betti.get(i).copied().unwrap_or(0) as u128;
        if actual != pivot_rank_formula(q, l, i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A set of directed edges on the Taylor cell poset, each from a cell to a
/// facet, intended to satisfy the three matching conditions (checked by
/// [`validate_matching`], not assumed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseMatching {
    edges: Vec<(IndexSet, IndexSet)>,
}

impl MorseMatching {
    /// Stores edges (upper cell, lower cell), deduplicated and sorted.
    pub fn new<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (IndexSet, IndexSet)>,
    {
        let set: BTreeSet<(IndexSet, IndexSet)> = edges.into_iter().collect();
        MorseMatching {
            edges: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        MorseMatching { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[(IndexSet, IndexSet)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// First violation found when checking the three matching conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingViolation {
    /// An edge that is not (cell, facet) over [q].
    MalformedEdge { upper: IndexSet, lower: IndexSet },
    /// Two edges share the given cell (condition 1).
    SharedVertex { cell: IndexSet },
    /// An edge whose endpoints have different lcms (condition 2).
    DegreeMismatch { upper: IndexSet, lower: IndexSet },
    /// A directed cycle in the modified graph (condition 3); the cells are
    /// listed in cycle order.
    Cycle { cells: Vec<IndexSet> },
}

impl std::fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatchingViolation::MalformedEdge { upper, lower } => {
                write!(f, "edge ({upper} -> {lower}) is not a cell-facet pair over the generators")
            }
            MatchingViolation::SharedVertex { cell } => {
                write!(f, "two edges share the cell {cell}")
            }
            MatchingViolation::DegreeMismatch { upper, lower } => {
                write!(f, "edge ({upper} -> {lower}) joins cells with different lcms")
            }
            MatchingViolation::Cycle { cells } => {
                let path: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
                write!(f, "modified graph has a directed cycle: {}", path.join(" -> "))
            }
        }
    }
}

/// Result of checking the three matching conditions.
#[derive(Clone, Debug)]
pub struct MatchingReport {
    pub valid: bool,
    pub violation: Option<MatchingViolation>,
}

pub fn validate_matching(ideal: &MonomialIdeal, matching: &MorseMatching) -> Result<MatchingReport> {
    validate_matching_with_limits(ideal, matching, &Limits::default())
}

/// Checks the three conditions in order: well-formed vertex-disjoint edges,
/// equal lcms across each edge, and acyclicity of the modified graph (by
/// depth-first search over all 2^q cells). Violations are report content;
/// the only error is the cell budget.
pub fn validate_matching_with_limits(
    ideal: &MonomialIdeal,
    matching: &MorseMatching,
    limits: &Limits,
) -> Result<MatchingReport> {
    let q = ideal.num_generators();
    limits.check_cells(q)?;
    let ground = IndexSet::full(q);

    let mut seen: BTreeSet<IndexSet> = BTreeSet::new();
    for &(upper, lower) in matching.edges() {
        let facet = lower.is_subset_of(upper)
            && upper.len() == lower.len() + 1
            && upper.is_subset_of(ground);
        if !facet {
            return Ok(MatchingReport {
                valid: false,
                violation: Some(MatchingViolation::MalformedEdge { upper, lower }),
            });
        }
        for cell in [upper, lower] {
            if !seen.insert(cell) {
                return Ok(MatchingReport {
                    valid: false,
                    violation: Some(MatchingViolation::SharedVertex { cell }),
                });
            }
        }
    }
    for &(upper, lower) in matching.edges() {
        if ideal.lcm_of(upper) != ideal.lcm_of(lower) {
            return Ok(MatchingReport {
                valid: false,
                violation: Some(MatchingViolation::DegreeMismatch { upper, lower }),
            });
        }
    }
    if let Some(cells) = find_cycle(q, matching) {
        return Ok(MatchingReport {
            valid: false,
            violation: Some(MatchingViolation::Cycle { cells }),
        });
    }
    Ok(MatchingReport {
        valid: true,
        violation: None,
    })
}

/// Lookup maps for a matching: which upper cell each lower cell points to
/// and vice versa.
fn matched_maps(
    matching: &MorseMatching,
) -> (HashMap<IndexSet, IndexSet>, HashMap<IndexSet, IndexSet>) {
    let mut upper_of = HashMap::new();
    let mut lower_of = HashMap::new();
    for &(upper, lower) in matching.edges() {
        upper_of.insert(lower, upper);
        lower_of.insert(upper, lower);
    }
    (upper_of, lower_of)
}

/// Searches the modified graph (facet edges, matched ones reversed) for a
/// directed cycle with an iterative three-color depth-first search.
fn find_cycle(q: usize, matching: &MorseMatching) -> Option<Vec<IndexSet>> {
    let (upper_of, lower_of) = matched_maps(matching);
    let neighbors = |v: IndexSet| -> Vec<IndexSet> {
        let mut out = Vec::new();
        for j in v.iter() {
            let face = v.without(j);
            if lower_of.get(&v) != Some(&face) {
                out.push(face);
            }
        }
        if let Some(&up) = upper_of.get(&v) {
            out.push(up);
        }
        out
    };

    // 0 = white, 1 = on stack (gray), 2 = done (black).
    let mut color = vec![0u8; 1usize << q];
    let idx = |v: IndexSet| v.mask() as usize;
    for start_mask in 0..(1u64 << q) {
        let start = IndexSet::from_mask(start_mask);
        if color[idx(start)] != 0 {
            continue;
        }
        let mut stack: Vec<(IndexSet, Vec<IndexSet>, usize)> =
            vec![(start, neighbors(start), 0)];
        color[idx(start)] = 1;
        let mut path = vec![start];
        while let Some((v, nbrs, next)) = stack.last_mut() {
            if *next < nbrs.len() {
                let w = nbrs[*next];
                *next += 1;
                match color[idx(w)] {
                    0 => {
                        color[idx(w)] = 1;
                        path.push(w);
                        let wn = neighbors(w);
                        stack.push((w, wn, 0));
                    }
                    1 => {
                        let from = path.iter().position(|&p| p == w).unwrap_or(0);
                        return Some(path[from..].to_vec());
                    }
                    _ => {}
                }
            } else {
                color[idx(*v)] = 2;
                path.pop();
                stack.pop();
            }
        }
    }
    None
}

/// A directed path in the modified graph from a critical cell down to the
/// first critical cell one cardinality lower, with the product of its edge
/// signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPath {
    pub vertices: Vec<IndexSet>,
    pub sign: i32,
}

pub fn gradient_paths(
    ideal: &MonomialIdeal,
    matching: &MorseMatching,
    from: IndexSet,
) -> Result<Vec<GradientPath>> {
    gradient_paths_with_limits(ideal, matching, from, &Limits::default())
}

/// Enumerates every directed path in the modified graph from `from` to a
/// critical cell of one cardinality lower.
///
/// The search may prune aggressively: an up-step enters the upper cell of a
/// matched edge, and a down-step into an upper-matched cell can only
/// continue further down, never back up to the starting cardinality — so
/// every path that reaches a critical cell alternates between the starting
/// cardinality and the one below, through lower-matched cells. Down-steps
/// into upper-matched cells are dead ends and are skipped.
pub fn gradient_paths_with_limits(
    ideal: &MonomialIdeal,
    matching: &MorseMatching,
    from: IndexSet,
    limits: &Limits,
) -> Result<Vec<GradientPath>> {
    let q = ideal.num_generators();
    assert!(
        from.is_subset_of(IndexSet::full(q)),
        "cell {from} is not a subset of {{1,...,{q}}}"
    );
    let (upper_of, lower_of) = matched_maps(matching);
    let mut paths = Vec::new();
    let mut budget = limits.max_paths;
    // Stack of partial paths ending at a cell of the starting cardinality.
    let mut stack: Vec<(Vec<IndexSet>, i32)> = vec![(vec![from], 1)];
    while let Some((path, sign)) = stack.pop() {
        let cell = *path.last().expect("paths are nonempty");
        for j in cell.iter() {
            let face = cell.without(j);
            if lower_of.get(&cell) == Some(&face) {
                // The matched edge out of `cell` is reversed, not a down-step.
                continue;
            }
            if budget == 0 {
                return Err(Error::PathLimit {
                    limit: limits.max_paths,
                });
            }
            budget -= 1;
            let down_sign = sign * sign_elem(j, face);
            match upper_of.get(&face) {
                None if lower_of.contains_key(&face) => {
                    // Upper-matched cell: any continuation only descends
                    // further and never reaches this cardinality again.
                }
                None => {
                    // Critical cell: a completed gradient path.
                    let mut vertices = path.clone();
                    vertices.push(face);
                    paths.push(GradientPath {
                        vertices,
                        sign: down_sign,
                    });
                }
                Some(&up) => {
                    // Lower-matched: traverse the reversed edge upward.
                    let up_sign = down_sign
                        * -sign_elem(
                            up.difference(face).min_element().expect("one element"),
                            face,
                        );
                    let mut vertices = path.clone();
                    vertices.push(face);
                    vertices.push(up);
                    stack.push((vertices, up_sign));
                }
            }
        }
    }
    // Deterministic output order regardless of stack traversal order.
    paths.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(paths)
}

/// The Morse resolution of a valid matching: basis the critical cells,
/// entry (τ′, τ) the sum of `m(P)` over gradient paths from τ to τ′, times
/// m_τ/m_{τ′}.
pub fn morse_resolution(ideal: &MonomialIdeal, matching: &MorseMatching) -> Result<BasedComplex> {
    morse_resolution_with_limits(ideal, matching, &Limits::default())
}

pub fn morse_resolution_with_limits(
    ideal: &MonomialIdeal,
    matching: &MorseMatching,
    limits: &Limits,
) -> Result<BasedComplex> {
    let report = validate_matching_with_limits(ideal, matching, limits)?;
    if let Some(violation) = report.violation {
        return Err(Error::InvalidMatching {
            reason: violation.to_string(),
        });
    }
    let q = ideal.num_generators();
    let (upper_of, lower_of) = matched_maps(matching);
    let is_critical =
        |cell: IndexSet| !upper_of.contains_key(&cell) && !lower_of.contains_key(&cell);

    let mut bases: Vec<Vec<BasisLabel>> = Vec::with_capacity(q + 1);
    let mut positions: Vec<HashMap<IndexSet, usize>> = Vec::with_capacity(q + 1);
    for t in 0..=q {
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for cell in subsets_with_cardinality(q, t) {
            if !is_critical(cell) {
                continue;
            }
            index.insert(cell, labels.len());
            labels.push(BasisLabel {
                cell,
                degree: ideal.lcm_of(cell),
            });
        }
        bases.push(labels);
        positions.push(index);
    }

    let mut diffs = Vec::with_capacity(q);
    for t in 1..=q {
        let mut d = PolyMatrix::zero(bases[t - 1].len(), bases[t].len());
        for (col, label) in bases[t].iter().enumerate() {
            let mut totals: HashMap<IndexSet, i64> = HashMap::new();
            for path in gradient_paths_with_limits(ideal, matching, label.cell, limits)? {
                let terminal = *path.vertices.last().expect("paths are nonempty");
                *totals.entry(terminal).or_insert(0) += i64::from(path.sign);
            }
            for (terminal, total) in totals {
                if total == 0 {
                    continue;
                }
                let row = positions[t - 1][&terminal];
                let shift = label
                    .degree
                    .quotient(&bases[t - 1][row].degree)
                    .expect("path targets divide the source lcm");
                d.set(
                    row,
                    col,
                    Polynomial::term(shift, Rational::from_integer(total.into())),
                );
            }
        }
        diffs.push(d);
    }

    trim_trailing_empty(&mut bases, &mut diffs);
    BasedComplex::new(ideal.nvars(), bases, diffs)
}

/// The Lyubeznik matching for a total order on the generators (given as the
/// permutation `order`, most significant first): each cell τ with
/// `L(τ) = sup{ j : m_{i_j} divides lcm({m_{i_1},…,m_{i_{j−1}}} ∩ τ) }`
/// defined contributes the edge (τ ∪ i_L → τ ∖ i_L). The sup over an empty
/// divisibility set is undefined and leaves τ unmatched.
pub fn lyubeznik_matching(ideal: &MonomialIdeal, order: &[usize]) -> Result<MorseMatching> {
    lyubeznik_matching_with_limits(ideal, order, &Limits::default())
}

pub fn lyubeznik_matching_with_limits(
    ideal: &MonomialIdeal,
    order: &[usize],
    limits: &Limits,
) -> Result<MorseMatching> {
    let q = ideal.num_generators();
    limits.check_cells(q)?;
    let mut seen = vec![false; q + 1];
    if order.len() != q {
        return Err(Error::InvalidArgument(format!(
            "order lists {} indices for {q} generators",
            order.len()
        )));
    }
    for &i in order {
        if i < 1 || i > q || seen[i] {
            return Err(Error::InvalidArgument(format!(
                "order is not a permutation of 1..={q}"
            )));
        }
        seen[i] = true;
    }

    let mut edges = BTreeSet::new();
    for mask in 0..(1u64 << q) {
        let tau = IndexSet::from_mask(mask);
        if let Some(position) = lyubeznik_l(ideal, order, tau) {
            let element = order[position - 1];
            edges.insert((tau.with(element), tau.without(element)));
        }
    }
    let matching = MorseMatching::new(edges);

    let report = validate_matching_with_limits(ideal, &matching, limits)?;
    if let Some(violation) = report.violation {
        return Err(Error::InvalidMatching {
            reason: format!(
                "constructed matching violates its own guarantee ({violation}); \
                 this indicates an implementation bug"
            ),
        });
    }
    Ok(matching)
}

/// L(τ): the largest position j whose generator divides the lcm of the
/// earlier-ordered generators lying in τ; `None` when no position works.
fn lyubeznik_l(ideal: &MonomialIdeal, order: &[usize], tau: IndexSet) -> Option<usize> {
    let q = order.len();
    for j in (1..=q).rev() {
        let prefix: Vec<usize> = order[..j - 1]
            .iter()
            .copied()
            .filter(|&i| tau.contains(i))
            .collect();
        if prefix.is_empty() {
            continue;
        }
        let lcm = ideal.lcm_of(prefix.iter().copied().collect());
        if ideal
            .generator(order[j - 1])
            .divides(&lcm)
            .expect("generators share the variable count")
        {
            return Some(j);
        }
    }
    None
}
