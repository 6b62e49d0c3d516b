//! The differential graded algebra structure on Taylor and pivot
//! resolutions: Gemeda's product on the Taylor complex, the pivot product on
//! a pivot resolution in normal form, and the quotient projection relating
//! the two.
//!
//! The pivot product's exceptional case carries the factor (−1)^{l+1}: this
//! is exactly the sign that makes the product agree with the image of
//! Gemeda's product under the quotient projection, and it is forced by the
//! Leibniz rule (both facts are in the test suite; dropping the factor
//! breaks Leibniz whenever l is even).

use std::collections::BTreeMap;

use crate::arith::{Polynomial, Rational};
use crate::combin::{sign_elem, sign_pair, IndexSet};
use crate::error::{Error, Result};
use crate::homotopy::{relabel_for_pivot, Relabeling};
use crate::resolutions::{find_gaps, MonomialIdeal};

/// A finite Q[x]-linear combination of cell-labeled basis elements; pieces
/// may span homological degrees. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainElement {
    nvars: usize,
    terms: BTreeMap<IndexSet, Polynomial>,
}

impl ChainElement {
    pub fn zero(nvars: usize) -> Self {
        ChainElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element ε_cell with coefficient 1.
    pub fn basis(nvars: usize, cell: IndexSet) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(cell, Polynomial::one(nvars));
        ChainElement { nvars, terms }
    }

    /// The unit of both products: ε_∅.
    pub fn unit(nvars: usize) -> Self {
        Self::basis(nvars, IndexSet::EMPTY)
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (IndexSet, Polynomial)>,
    {
        let mut out = ChainElement::zero(nvars);
        for (cell, value) in terms {
            out.add_term(cell, value);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, cell: IndexSet) -> Option<&Polynomial> {
        self.terms.get(&cell)
    }

    pub fn terms(&self) -> impl Iterator<Item = (IndexSet, &Polynomial)> {
        self.terms.iter().map(|(&cell, value)| (cell, value))
    }

    pub fn scaled(&self, factor: &Polynomial) -> Self {
        let mut out = ChainElement::zero(self.nvars);
        for (cell, value) in self.terms() {
            out.add_term(cell, value * factor);
        }
        out
    }

    fn add_term(&mut self, cell: IndexSet, value: Polynomial) {
        if value.is_zero() {
            return;
        }
        match self.terms.get_mut(&cell) {
            Some(present) => {
                let sum = &*present + &value;
                if sum.is_zero() {
                    self.terms.remove(&cell);
                } else {
                    *present = sum;
                }
            }
            None => {
                self.terms.insert(cell, value);
            }
        }
    }
}

impl std::ops::Add for &ChainElement {
    type Output = ChainElement;
    fn add(self, rhs: &ChainElement) -> ChainElement {
        assert_eq!(self.nvars, rhs.nvars, "mixed variable counts");
        let mut out = self.clone();
        for (cell, value) in rhs.terms() {
            out.add_term(cell, value.clone());
        }
        out
    }
}

impl std::ops::Neg for &ChainElement {
    type Output = ChainElement;
    fn neg(self) -> ChainElement {
        let mut out = ChainElement::zero(self.nvars);
        for (cell, value) in self.terms() {
            out.add_term(cell, -value);
        }
        out
    }
}

impl std::ops::Sub for &ChainElement {
    type Output = ChainElement;
    fn sub(self, rhs: &ChainElement) -> ChainElement {
        self + &(-rhs)
    }
}

fn validate_element(ideal: &MonomialIdeal, x: &ChainElement) -> Result<()> {
    if x.nvars() != ideal.nvars() {
        return Err(Error::InvalidArgument(format!(
            "element over {} variables used with an ideal over {}",
            x.nvars(),
            ideal.nvars()
        )));
    }
    let ground = IndexSet::full(ideal.num_generators());
    for (cell, _) in x.terms() {
        if !cell.is_subset_of(ground) {
            return Err(Error::InvalidArgument(format!(
                "cell {cell} is not a subset of {{1,...,{}}}",
                ideal.num_generators()
            )));
        }
    }
    Ok(())
}

fn validate_normal_form(ideal: &MonomialIdeal, l: usize) -> Result<()> {
    let q = ideal.num_generators();
    if l < 2 || l + 1 > q {
        return Err(Error::InvalidPivotSet {
            reason: format!("normal-form pivot size {l} does not leave room for a gap in [{q}]"),
        });
    }
    if !find_gaps(ideal, IndexSet::full(l)).contains(l + 1) {
        return Err(Error::InvalidArgument(format!(
            "{} is not a gap of {}: the ideal is not in pivot normal form",
            l + 1,
            IndexSet::full(l)
        )));
    }
    Ok(())
}

fn validate_pivot_element(ideal: &MonomialIdeal, l: usize, x: &ChainElement) -> Result<()> {
    validate_element(ideal, x)?;
    let prefix = IndexSet::full(l);
    for (cell, _) in x.terms() {
        if cell.is_superset_of(prefix) {
            return Err(Error::InvalidArgument(format!(
                "cell {cell} contains the pivot set {prefix}, so it is outside the pivot basis"
            )));
        }
    }
    Ok(())
}

/// Gemeda's product on the Taylor resolution, extended bilinearly:
/// ε_A ⋆ ε_B = sign(A,B)·(m_A·m_B/m_{A∪B})·ε_{A∪B}, zero on overlap.
pub fn taylor_product(
    ideal: &MonomialIdeal,
    x: &ChainElement,
    y: &ChainElement,
) -> Result<ChainElement> {
    validate_element(ideal, x)?;
    validate_element(ideal, y)?;
    let mut out = ChainElement::zero(ideal.nvars());
    for (a, p) in x.terms() {
        for (b, r) in y.terms() {
            let sign = sign_pair(a, b);
            if sign == 0 {
                continue;
            }
            let union = a.union(b);
            let shift = ideal
                .lcm_of(a)
                .sum(&ideal.lcm_of(b))
                .expect("same variable count")
                .quotient(&ideal.lcm_of(union))
                .expect("union lcm divides the product");
            let value =
                &(p * r) * &Polynomial::term(shift, Rational::from_integer(sign.into()));
            out.add_term(union, value);
        }
    }
    Ok(out)
}

/// The ambient differential, applied cell-wise:
/// ∂ε_τ = Σ_{j∈τ} sign(j, τ∖j)·(m_τ/m_{τ∖j})·ε_{τ∖j}. Restricting to a
/// pivot basis is harmless since facets of pivot cells are pivot cells.
pub fn differential(ideal: &MonomialIdeal, x: &ChainElement) -> Result<ChainElement> {
    validate_element(ideal, x)?;
    let mut out = ChainElement::zero(ideal.nvars());
    for (cell, p) in x.terms() {
        let m_cell = ideal.lcm_of(cell);
        for j in cell.iter() {
            let face = cell.without(j);
            let shift = m_cell
                .quotient(&ideal.lcm_of(face))
                .expect("face lcm divides cell lcm");
            let sign = sign_elem(j, face);
            let value = p * &Polynomial::term(shift, Rational::from_integer(sign.into()));
            out.add_term(face, value);
        }
    }
    Ok(out)
}

/// The product on the pivot resolution in normal form (pivot set {1,…,l},
/// gap l+1), extended bilinearly from the basis rule: zero when the cells
/// overlap or their union contains {1,…,l+1}; Gemeda's formula when the
/// union does not contain {1,…,l}; and otherwise
/// (−1)^{l+1}·sign(A,B)·Σ_{i≤l} sign(i,A∪B∖i)·(m_A·m_B/m_{A∪B∪(l+1)∖i})·ε_{A∪B∪(l+1)∖i}.
pub fn pivot_product(
    ideal: &MonomialIdeal,
    l: usize,
    x: &ChainElement,
    y: &ChainElement,
) -> Result<ChainElement> {
    validate_normal_form(ideal, l)?;
    validate_pivot_element(ideal, l, x)?;
    validate_pivot_element(ideal, l, y)?;
    let prefix = IndexSet::full(l);
    let prefix_and_gap = IndexSet::full(l + 1);
    let mut out = ChainElement::zero(ideal.nvars());
    for (a, p) in x.terms() {
        for (b, r) in y.terms() {
            if !a.is_disjoint(b) || prefix_and_gap.is_subset_of(a.union(b)) {
                continue;
            }
            let union = a.union(b);
            let coefficient = p * r;
            if !prefix.is_subset_of(union) {
                let sign = sign_pair(a, b);
                let shift = ideal
                    .lcm_of(a)
                    .sum(&ideal.lcm_of(b))
                    .expect("same variable count")
                    .quotient(&ideal.lcm_of(union))
                    .expect("union lcm divides the product");
                let value = &coefficient
                    * &Polynomial::term(shift, Rational::from_integer(sign.into()));
                out.add_term(union, value);
                continue;
            }
            // Exceptional case; the two branches above exhaust every other
            // configuration, so the union misses the gap here.
            assert!(
                !union.contains(l + 1),
                "uncovered product configuration for cells {a} and {b}"
            );
            let outer = if l % 2 == 0 { -1 } else { 1 }; // (−1)^{l+1}
            let lead = outer * sign_pair(a, b);
            let product_degree = ideal
                .lcm_of(a)
                .sum(&ideal.lcm_of(b))
                .expect("same variable count");
            for i in 1..=l {
                let target = union.with(l + 1).without(i);
                debug_assert!(
                    !target.is_superset_of(prefix),
                    "pivot product left the pivot basis"
                );
                let sign = lead * sign_elem(i, union.without(i));
                if sign == 0 {
                    continue;
                }
                let shift = product_degree
                    .quotient(&ideal.lcm_of(target))
                    .expect("target lcm divides the product");
                let value = &coefficient
                    * &Polynomial::term(shift, Rational::from_integer(sign.into()));
                out.add_term(target, value);
            }
        }
    }
    Ok(out)
}

/// Projection from the Taylor complex onto the pivot complex in normal
/// form, i.e. the quotient by span{ε_τ, ∂ε_τ : τ ⊇ {1,…,l+1}}: cells
/// outside the pivot set pass through, cells containing {1,…,l+1} die, and
/// a cell σ ⊇ {1,…,l} missing the gap is rewritten through the relation
/// ∂ε_{σ∪(l+1)} ≡ 0, whose coefficient on ε_σ is ±1 because m_σ equals
/// m_{σ∪(l+1)}.
pub fn quotient_projection(
    ideal: &MonomialIdeal,
    l: usize,
    x: &ChainElement,
) -> Result<ChainElement> {
    validate_normal_form(ideal, l)?;
    validate_element(ideal, x)?;
    let prefix = IndexSet::full(l);
    let mut out = ChainElement::zero(ideal.nvars());
    for (cell, p) in x.terms() {
        if !cell.is_superset_of(prefix) {
            out.add_term(cell, p.clone());
            continue;
        }
        if cell.contains(l + 1) {
            continue;
        }
        // Solve ∂ε_{σ∪(l+1)} ≡ 0 for ε_σ; the remaining terms either stay
        // in the pivot basis (j ≤ l) or die in the quotient (j > l).
        let lead = -sign_elem(l + 1, cell);
        let m_cell = ideal.lcm_of(cell);
        debug_assert_eq!(
            m_cell,
            ideal.lcm_of(cell.with(l + 1)),
            "the gap must not change the lcm"
        );
        for j in 1..=l {
            let target = cell.with(l + 1).without(j);
            let sign = lead * sign_elem(j, target);
            let shift = m_cell
                .quotient(&ideal.lcm_of(target))
                .expect("target lcm divides the cell lcm");
            let value = p * &Polynomial::term(shift, Rational::from_integer(sign.into()));
            out.add_term(target, value);
        }
    }
    Ok(out)
}

/// Transport along a relabeling: ε_A ↦ transport_sign(A)·ε_{π(A)},
/// extended linearly. With the sign, transport is an isomorphism of
/// complexes and of algebras.
pub fn relabel_element(relabeling: &Relabeling, x: &ChainElement) -> ChainElement {
    let mut out = ChainElement::zero(x.nvars());
    for (cell, p) in x.terms() {
        let sign = relabeling.transport_sign(cell);
        out.add_term(
            relabeling.apply_set(cell),
            p * &Polynomial::constant(x.nvars(), Rational::from_integer(sign.into())),
        );
    }
    out
}

/// The pivot product for an arbitrary pivot set with a gap, working in
/// original labels: inputs are transported to the normal form, multiplied
/// there, and transported back.
pub fn pivot_product_for_set(
    ideal: &MonomialIdeal,
    pivot_set: IndexSet,
    x: &ChainElement,
    y: &ChainElement,
) -> Result<ChainElement> {
    let (relabeling, _gap) = relabel_for_pivot(ideal, pivot_set)?;
    let relabeled = relabeling.apply_ideal(ideal);
    let l = pivot_set.len();
    let product = pivot_product(
        &relabeled,
        l,
        &relabel_element(&relabeling, x),
        &relabel_element(&relabeling, y),
    )?;
    Ok(relabel_element(&relabeling.inverse(), &product))
}
