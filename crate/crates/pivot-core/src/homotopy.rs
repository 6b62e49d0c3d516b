//! Systems of higher homotopies on Taylor and pivot resolutions for a
//! collection of ring elements lying inside the monomial ideal.
//!
//! A system assigns to each element a_s a degree-raising map σ_s with
//! `∂σ_s + σ_s∂ = a_s·id`, with all squares and mixed anticommutators
//! vanishing; every identity is checked by exact matrix arithmetic in
//! [`verify_homotopy`], never assumed from the construction.

use std::collections::BTreeMap;

use num_traits::One;

use crate::arith::{Multidegree, Polynomial, Rational};
use crate::combin::{sign_elem, IndexSet};
use crate::complex::{BasedComplex, PolyMatrix};
use crate::error::{Error, Result};
use crate::resolutions::{
    find_gaps, pivot_complex_with_limits, taylor_resolution_with_limits, Limits, MonomialIdeal,
};

/// A permutation of the generator indices 1..=q, with the signed transport
/// it induces on cell-labeled bases: relabeling sends ε_A to
/// `transport_sign(A) · ε_{π(A)}`, the sign being that of sorting the
/// permuted elements back into ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    /// forward[i-1] = π(i)
    forward: Vec<usize>,
    /// backward[π(i)-1] = i
    backward: Vec<usize>,
}

impl Relabeling {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let q = forward.len();
        let mut backward = vec![0usize; q];
        for (i, &image) in forward.iter().enumerate() {
            if image < 1 || image > q || backward[image - 1] != 0 {
                return Err(Error::InvalidArgument(format!(
                    "relabeling is not a permutation of 1..={q}"
                )));
            }
            backward[image - 1] = i + 1;
        }
        Ok(Relabeling { forward, backward })
    }

    pub fn identity(q: usize) -> Self {
        let forward: Vec<usize> = (1..=q).collect();
        Relabeling {
            backward: forward.clone(),
            forward,
        }
    }

    pub fn q(&self) -> usize {
        self.forward.len()
    }

    pub fn image(&self, index: usize) -> usize {
        self.forward[index - 1]
    }

    pub fn preimage(&self, index: usize) -> usize {
        self.backward[index - 1]
    }

    pub fn inverse(&self) -> Relabeling {
        Relabeling {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn apply_set(&self, cell: IndexSet) -> IndexSet {
        cell.iter().map(|i| self.image(i)).collect()
    }

    /// Sign of sorting the sequence (π(a₁), …, π(a_t)) ascending, where
    /// a₁ < … < a_t are the elements of `cell`: (−1) to the inversion count.
    pub fn transport_sign(&self, cell: IndexSet) -> i32 {
        let images: Vec<usize> = cell.iter().map(|i| self.image(i)).collect();
        let mut inversions = 0usize;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] > images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The ideal with generators repositioned so that old generator i sits
    /// at position π(i).
    pub fn apply_ideal(&self, ideal: &MonomialIdeal) -> MonomialIdeal {
        assert_eq!(self.q(), ideal.num_generators(), "permutation size mismatch");
        let mut generators = vec![Multidegree::zero(ideal.nvars()); self.q()];
        for i in 1..=self.q() {
            generators[self.image(i) - 1] = ideal.generator(i).clone();
        }
        MonomialIdeal::new(ideal.nvars(), generators)
            .expect("permuting a valid generating set keeps it valid")
    }
}

/// The normal-form relabeling for a pivot set: π maps S onto {1,…,l}
/// order-preservingly, the smallest gap of S to l+1, and the remaining
/// indices to l+2,…,q in increasing order. Returns the relabeling and the
/// chosen gap (in original labels).
pub fn relabel_for_pivot(ideal: &MonomialIdeal, pivot_set: IndexSet) -> Result<(Relabeling, usize)> {
    let q = ideal.num_generators();
    if !pivot_set.is_subset_of(IndexSet::full(q)) {
        return Err(Error::InvalidPivotSet {
            reason: format!("{pivot_set} is not contained in {{1,...,{q}}}"),
        });
    }
    let gaps = find_gaps(ideal, pivot_set);
    let Some(gap) = gaps.min_element() else {
        return Err(Error::InvalidArgument(format!(
            "{pivot_set} has no gap, so no pivot normal form exists"
        )));
    };
    let mut forward = vec![0usize; q];
    let mut next = 1usize;
    for i in pivot_set.iter() {
        forward[i - 1] = next;
        next += 1;
    }
    forward[gap - 1] = next;
    next += 1;
    for i in 1..=q {
        if forward[i - 1] == 0 {
            forward[i - 1] = next;
            next += 1;
        }
    }
    Ok((Relabeling::new(forward).expect("constructed permutation"), gap))
}

/// Choice rule for distributing the terms of a polynomial over the
/// generators that divide them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpressStrategy {
    /// Each term goes to the lowest-index dividing generator.
    FirstDivisor,
    /// Each term goes to the highest-index dividing generator.
    LastDivisor,
}

/// Writes `a` as Σ_j out_j·m_j by assigning each term of `a` to one
/// generator dividing it. Fails with a membership error on any term no
/// generator divides; the reconstruction Σ out_j·m_j = a is asserted.
pub fn express_in_generators(a: &Polynomial, ideal: &MonomialIdeal) -> Result<Vec<Polynomial>> {
    express_in_generators_with(a, ideal, ExpressStrategy::FirstDivisor)
}

pub fn express_in_generators_with(
    a: &Polynomial,
    ideal: &MonomialIdeal,
    strategy: ExpressStrategy,
) -> Result<Vec<Polynomial>> {
    if a.nvars() != ideal.nvars() {
        return Err(Error::DimensionMismatch {
            left: ideal.nvars(),
            right: a.nvars(),
        });
    }
    let q = ideal.num_generators();
    let mut out = vec![Polynomial::zero(ideal.nvars()); q];
    for (degree, coefficient) in a.terms() {
        let indices: Vec<usize> = (1..=q).collect();
        let found = match strategy {
            ExpressStrategy::FirstDivisor => indices
                .iter()
                .find(|&&j| ideal.generator(j).divides(degree).unwrap_or(false)),
            ExpressStrategy::LastDivisor => indices
                .iter()
                .rev()
                .find(|&&j| ideal.generator(j).divides(degree).unwrap_or(false)),
        };
        let Some(&j) = found else {
            return Err(Error::NotInIdeal {
                term: degree.format_with(&default_var_names(a.nvars())),
            });
        };
        let shift = degree
            .quotient(ideal.generator(j))
            .expect("divisor was just checked");
        out[j - 1] = &out[j - 1] + &Polynomial::term(shift, coefficient.clone());
    }
    let rebuilt = out
        .iter()
        .enumerate()
        .map(|(j, c)| c * &Polynomial::term(ideal.generator(j + 1).clone(), Rational::one()))
        .fold(Polynomial::zero(a.nvars()), |acc, p| &acc + &p);
    assert_eq!(&rebuilt, a, "generator expression failed to reconstruct");
    Ok(out)
}

fn default_var_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

/// Ring elements a₁,…,a_r inside the monomial ideal, each carried with an
/// exact expression a_s = Σ_j coefficients[s][j]·m_j. Whether the elements
/// form a regular sequence is not (and cannot cheaply be) certified here;
/// every homotopy identity downstream holds regardless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIData {
    elements: Vec<Polynomial>,
    coefficients: Vec<Vec<Polynomial>>,
}

impl CIData {
    pub fn new(
        ideal: &MonomialIdeal,
        elements: Vec<Polynomial>,
        coefficients: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let q = ideal.num_generators();
        if coefficients.len() != elements.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficient rows for {} elements",
                coefficients.len(),
                elements.len()
            )));
        }
        for (s, (a, row)) in elements.iter().zip(&coefficients).enumerate() {
            if row.len() != q {
                return Err(Error::InvalidArgument(format!(
                    "coefficient row {} has {} entries for {q} generators",
                    s + 1,
                    row.len()
                )));
            }
            let rebuilt = row
                .iter()
                .enumerate()
                .map(|(j, c)| c * &Polynomial::term(ideal.generator(j + 1).clone(), Rational::one()))
                .fold(Polynomial::zero(ideal.nvars()), |acc, p| &acc + &p);
            if &rebuilt != a {
                return Err(Error::InvalidArgument(format!(
                    "coefficient row {} does not reconstruct its element",
                    s + 1
                )));
            }
        }
        Ok(CIData {
            elements,
            coefficients,
        })
    }

    /// Builds the coefficient rows by [`express_in_generators_with`].
    pub fn from_elements(
        ideal: &MonomialIdeal,
        elements: Vec<Polynomial>,
        strategy: ExpressStrategy,
    ) -> Result<Self> {
        let coefficients = elements
            .iter()
            .map(|a| express_in_generators_with(a, ideal, strategy))
            .collect::<Result<Vec<_>>>()?;
        Ok(CIData {
            elements,
            coefficients,
        })
    }

    pub fn r(&self) -> usize {
        self.elements.len()
    }

    /// Element a_s by 1-based index.
    pub fn element(&self, s: usize) -> &Polynomial {
        &self.elements[s - 1]
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// Coefficient a_{sj} (s, j 1-based) in a_s = Σ_j a_{sj}·m_j.
    pub fn coefficient(&self, s: usize, j: usize) -> &Polynomial {
        &self.coefficients[s - 1][j - 1]
    }
}

/// A system of higher homotopies: the base complex (σ₀ is its differential)
/// together with, for each element a_s, a map σ_s raising homological degree
/// by one. All higher maps σ_u with |u| ≥ 2 are zero and stored implicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopySystem {
    complex: BasedComplex,
    /// maps[s-1][i] is σ_s restricted to degree i, a matrix F_i → F_{i+1};
    /// the entry at i = top has zero rows.
    maps: Vec<Vec<PolyMatrix>>,
}

impl HomotopySystem {
    /// Assembles a system from explicit matrices, validating only shapes;
    /// use [`verify_homotopy`] to check the homotopy identities.
    pub fn from_parts(complex: BasedComplex, maps: Vec<Vec<PolyMatrix>>) -> Result<Self> {
        let ranks = complex.ranks();
        let top = complex.top_degree();
        for (s, stack) in maps.iter().enumerate() {
            if stack.len() != top + 1 {
                return Err(Error::Structural(format!(
                    "homotopy {} has {} degree slices for top degree {top}",
                    s + 1,
                    stack.len()
                )));
            }
            for (i, m) in stack.iter().enumerate() {
                let target = if i + 1 <= top { ranks[i + 1] } else { 0 };
                if m.rows() != target || m.cols() != ranks[i] {
                    return Err(Error::Structural(format!(
                        "homotopy {} at degree {i} is {}x{}, expected {target}x{}",
                        s + 1,
                        m.rows(),
                        m.cols(),
                        ranks[i]
                    )));
                }
            }
        }
        Ok(HomotopySystem { complex, maps })
    }

    pub fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    pub fn r(&self) -> usize {
        self.maps.len()
    }

    /// σ_s restricted to homological degree `degree` (s 1-based).
    pub fn map(&self, s: usize, degree: usize) -> &PolyMatrix {
        &self.maps[s - 1][degree]
    }

    #[cfg(test)]
    fn map_mut(&mut self, s: usize, degree: usize) -> &mut PolyMatrix {
        &mut self.maps[s - 1][degree]
    }
}

/// Shared builder: σ_s(ε_A) = Σ_{j ∉ A, kept by `keep`} sign(j,A)·a_{sj}·
/// (m_j·m_A/m_{A∪j})·ε_{A∪j}, plus an optional extra chain per cell.
fn build_maps<K, X>(
    ideal: &MonomialIdeal,
    complex: &BasedComplex,
    ci: &CIData,
    keep: K,
    extra: X,
) -> Result<Vec<Vec<PolyMatrix>>>
where
    K: Fn(IndexSet, usize) -> bool,
    X: Fn(usize, IndexSet) -> Vec<(IndexSet, Polynomial)>,
{
    let q = ideal.num_generators();
    let top = complex.top_degree();
    let ranks = complex.ranks();
    let mut maps = Vec::with_capacity(ci.r());
    for s in 1..=ci.r() {
        let mut stack = Vec::with_capacity(top + 1);
        for degree in 0..=top {
            let target = if degree + 1 <= top { ranks[degree + 1] } else { 0 };
            let mut m = PolyMatrix::zero(target, ranks[degree]);
            for (col, label) in complex.basis(degree).iter().enumerate() {
                let cell = label.cell;
                let mut terms: BTreeMap<IndexSet, Polynomial> = BTreeMap::new();
                for j in 1..=q {
                    if cell.contains(j) || !keep(cell, j) {
                        continue;
                    }
                    let a_sj = ci.coefficient(s, j);
                    if a_sj.is_zero() {
                        continue;
                    }
                    let product = ideal
                        .generator(j)
                        .sum(&label.degree)
                        .expect("same variable count");
                    let shift = product
                        .quotient(&ideal.lcm_of(cell.with(j)))
                        .expect("lcm divides the product of its arguments");
                    let sign = sign_elem(j, cell);
                    let term = a_sj * &Polynomial::term(shift, Rational::from_integer(sign.into()));
                    accumulate(&mut terms, cell.with(j), term);
                }
                for (target_cell, value) in extra(s, cell) {
                    accumulate(&mut terms, target_cell, value);
                }
                for (target_cell, value) in terms {
                    let Some(row) = complex.find_basis(degree + 1, target_cell) else {
                        return Err(Error::Structural(format!(
                            "homotopy output {target_cell} is outside the basis in degree {}",
                            degree + 1
                        )));
                    };
                    m.set(row, col, value);
                }
            }
            stack.push(m);
        }
        maps.push(stack);
    }
    Ok(maps)
}

fn accumulate(terms: &mut BTreeMap<IndexSet, Polynomial>, cell: IndexSet, value: Polynomial) {
    if value.is_zero() {
        return;
    }
    match terms.get_mut(&cell) {
        Some(present) => {
            let sum = &*present + &value;
            if sum.is_zero() {
                terms.remove(&cell);
            } else {
                *present = sum;
            }
        }
        None => {
            terms.insert(cell, value);
        }
    }
}

/// The homotopy system on the full Taylor resolution:
/// σ_s(ε_A) = Σ_{j∉A} sign(j,A)·a_{sj}·(m_j·m_A/m_{A∪j})·ε_{A∪j}.
pub fn taylor_homotopy(ideal: &MonomialIdeal, ci: &CIData) -> Result<HomotopySystem> {
    taylor_homotopy_with_limits(ideal, ci, &Limits::default())
}

pub fn taylor_homotopy_with_limits(
    ideal: &MonomialIdeal,
    ci: &CIData,
    limits: &Limits,
) -> Result<HomotopySystem> {
    let complex = taylor_resolution_with_limits(ideal, limits)?;
    let maps = build_maps(ideal, &complex, ci, |_, _| true, |_, _| Vec::new())?;
    HomotopySystem::from_parts(complex, maps)
}

/// The homotopy system on the pivot resolution in normal form (pivot set
/// {1,…,l} with gap l+1). Three cases per basis cell A:
/// all of {1,…,l} minus A larger than one element — the Taylor formula;
/// exactly one missing element t with l+1 ∈ A — the Taylor sum restricted to
/// j ∉ A∪{t}; exactly one missing element t with l+1 ∉ A — the restricted
/// sum plus the correction
/// (−1)^{l+1}·sign(t,A)·a_{st}·Σ_{i≤l} sign(i,A∪t∖i)·(m_t·m_A/m_{A∪t∪(l+1)∖i})·ε_{A∪t∪(l+1)∖i}.
pub fn pivot_homotopy(ideal: &MonomialIdeal, l: usize, ci: &CIData) -> Result<HomotopySystem> {
    pivot_homotopy_with_limits(ideal, l, ci, &Limits::default())
}

pub fn pivot_homotopy_with_limits(
    ideal: &MonomialIdeal,
    l: usize,
    ci: &CIData,
    limits: &Limits,
) -> Result<HomotopySystem> {
    let q = ideal.num_generators();
    if l < 2 || l + 1 > q {
        return Err(Error::InvalidPivotSet {
            reason: format!("normal-form pivot size {l} does not leave room for a gap in [{q}]"),
        });
    }
    let prefix = IndexSet::full(l);
    if !find_gaps(ideal, prefix).contains(l + 1) {
        return Err(Error::InvalidArgument(format!(
            "{} is not a gap of {prefix}: the ideal is not in pivot normal form",
            l + 1
        )));
    }
    let complex = pivot_complex_with_limits(ideal, prefix, limits)?;

    let keep = move |cell: IndexSet, j: usize| -> bool {
        let missing = prefix.difference(cell);
        if missing.len() != 1 {
            return true;
        }
        let t = missing.min_element().expect("one element");
        j != t
    };
    let extra = move |s: usize, cell: IndexSet| -> Vec<(IndexSet, Polynomial)> {
        let missing = prefix.difference(cell);
        if missing.len() != 1 || cell.contains(l + 1) {
            return Vec::new();
        }
        let t = missing.min_element().expect("one element");
        let a_st = ci.coefficient(s, t);
        if a_st.is_zero() {
            return Vec::new();
        }
        let outer = if l % 2 == 0 { -1 } else { 1 }; // (−1)^{l+1}
        let lead = outer * sign_elem(t, cell);
        let with_t = cell.with(t);
        let product = ideal
            .generator(t)
            .sum(&ideal.lcm_of(cell))
            .expect("same variable count");
        let mut out = Vec::new();
        for i in 1..=l {
            let target = with_t.with(l + 1).without(i);
            let sign = lead * sign_elem(i, with_t.without(i));
            if sign == 0 {
                continue;
            }
            let shift = product
                .quotient(&ideal.lcm_of(target))
                .expect("target lcm divides m_t·m_A");
            let value =
                a_st * &Polynomial::term(shift, Rational::from_integer(sign.into()));
            out.push((target, value));
        }
        out
    };

    let maps = build_maps(ideal, &complex, ci, keep, extra)?;
    HomotopySystem::from_parts(complex, maps)
}

/// One checked identity with its outcome.
#[derive(Clone, Debug)]
pub struct HomotopyCheck {
    /// Human-readable identity, e.g. "d·σ_1 + σ_1·d = a_1·id".
    pub identity: String,
    pub pass: bool,
    pub offense: Option<HomotopyOffense>,
}

/// First offending entry of a failed identity.
#[derive(Clone, Debug)]
pub struct HomotopyOffense {
    /// Homological degree of the source module.
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub value: Polynomial,
}

/// Outcome of checking every homotopy identity.
#[derive(Clone, Debug)]
pub struct HomotopyReport {
    pub checks: Vec<HomotopyCheck>,
}

impl HomotopyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Exact verification of every identity a system of higher homotopies must
/// satisfy when all maps beyond the first order vanish: the differential
/// squares to zero; `∂σ_s + σ_s∂ = a_s·id` for each s; `σ_s² = 0`; and
/// `σ_sσ_{s'} + σ_{s'}σ_s = 0` for s < s′.
pub fn verify_homotopy(system: &HomotopySystem, ci: &CIData) -> Result<HomotopyReport> {
    if system.r() != ci.r() {
        return Err(Error::InvalidArgument(format!(
            "system carries {} homotopies for {} elements",
            system.r(),
            ci.r()
        )));
    }
    let complex = system.complex();
    let top = complex.top_degree();
    let ranks = complex.ranks();
    let mut checks = Vec::new();

    let square = crate::complex::check_d_squared(complex)?;
    checks.push(HomotopyCheck {
        identity: "d·d = 0".to_string(),
        pass: square.pass,
        offense: square.offense.map(|o| HomotopyOffense {
            degree: o.into_degree + 2,
            row: o.row,
            col: o.col,
            value: o.value,
        }),
    });

    for s in 1..=ci.r() {
        let mut offense = None;
        for degree in 0..=top {
            let mut sum = if degree + 1 <= top {
                complex.differential(degree + 1).mul(system.map(s, degree))?
            } else {
                PolyMatrix::zero(ranks[degree], ranks[degree])
            };
            if degree >= 1 {
                sum = sum.add(&system.map(s, degree - 1).mul(complex.differential(degree))?)?;
            }
            let expected = PolyMatrix::scaled_identity(ranks[degree], ci.element(s));
            if let Some(o) = first_difference(&sum, &expected, degree) {
                offense = Some(o);
                break;
            }
        }
        checks.push(HomotopyCheck {
            identity: format!("d·σ_{s} + σ_{s}·d = a_{s}·id"),
            pass: offense.is_none(),
            offense,
        });
    }

    for s in 1..=ci.r() {
        let offense = first_composite_offense(system, s, s, top)?;
        checks.push(HomotopyCheck {
            identity: format!("σ_{s}·σ_{s} = 0"),
            pass: offense.is_none(),
            offense,
        });
    }

    for s in 1..=ci.r() {
        for t in s + 1..=ci.r() {
            let offense = first_anticommutator_offense(system, s, t, top)?;
            checks.push(HomotopyCheck {
                identity: format!("σ_{s}·σ_{t} + σ_{t}·σ_{s} = 0"),
                pass: offense.is_none(),
                offense,
            });
        }
    }

    Ok(HomotopyReport { checks })
}

fn first_difference(
    actual: &PolyMatrix,
    expected: &PolyMatrix,
    degree: usize,
) -> Option<HomotopyOffense> {
    let residual = actual
        .add(&expected.negated())
        .expect("shapes were constructed to match");
    let offense = residual
        .entries()
        .next()
        .map(|(row, col, value)| HomotopyOffense {
            degree,
            row,
            col,
            value: value.clone(),
        });
    offense
}

fn first_composite_offense(
    system: &HomotopySystem,
    s: usize,
    t: usize,
    top: usize,
) -> Result<Option<HomotopyOffense>> {
    for degree in 0..top {
        let product = system.map(s, degree + 1).mul(system.map(t, degree))?;
        let first = product
            .entries()
            .next()
            .map(|(r, c, p)| (r, c, p.clone()));
        if let Some((row, col, value)) = first {
            return Ok(Some(HomotopyOffense {
                degree,
                row,
                col,
                value,
            }));
        }
    }
    Ok(None)
}

fn first_anticommutator_offense(
    system: &HomotopySystem,
    s: usize,
    t: usize,
    top: usize,
) -> Result<Option<HomotopyOffense>> {
    for degree in 0..top {
        let sum = system
            .map(s, degree + 1)
            .mul(system.map(t, degree))?
            .add(&system.map(t, degree + 1).mul(system.map(s, degree))?)?;
        let first = sum.entries().next().map(|(r, c, p)| (r, c, p.clone()));
        if let Some((row, col, value)) = first {
            return Ok(Some(HomotopyOffense {
                degree,
                row,
                col,
                value,
            }));
        }
    }
    Ok(None)
}
