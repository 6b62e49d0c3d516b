//! Verification routines behind `verify`: differential squares, exactness
//! against the ideal, and exhaustive product-structure checks.

use anyhow::{bail, Result};
use pivot_core::combin::{subsets_by_cardinality, IndexSet};
use pivot_core::complex::{check_d_squared, is_resolution, BasedComplex, EXACTNESS_SCOPE_NOTE};
use pivot_core::dg::{
    differential, pivot_product, quotient_projection, taylor_product, ChainElement,
};
use pivot_core::resolutions::MonomialIdeal;

use crate::output::{render_vector, Certificate};

/// Exhaustive product checks enumerate all pairs and triples of basis
/// elements, so they are capped at 2^5 cells.
pub const PRODUCT_CHECK_MAX_GENERATORS: usize = 5;

/// Checks that consecutive differentials compose to zero.
pub fn check_d2(complex: &BasedComplex, vars: &[String], cert: &mut Certificate) -> Result<bool> {
    let report = check_d_squared(complex)?;
    let witness = report.offense.as_ref().map(|o| {
        format!(
            "nonzero composite entry into degree {}, row {}, column {}: {}",
            o.into_degree,
            o.row,
            o.col,
            o.value.format_with(vars)
        )
    });
    cert.push("d∘d = 0", report.pass, witness);
    Ok(report.pass)
}

/// Checks that the complex resolves the quotient by the ideal: degree-0
/// presentation plus vanishing positive homology on every lattice strand.
pub fn check_exactness(
    complex: &BasedComplex,
    ideal: &MonomialIdeal,
    vars: &[String],
    cert: &mut Certificate,
) -> Result<bool> {
    let report = is_resolution(complex, ideal)?;
    cert.note = Some(EXACTNESS_SCOPE_NOTE.to_string());
    let witness = report.failure.as_ref().map(|f| {
        format!(
            "homology of dimension {} in homological degree {} at multidegree {}; witness cycle {}",
            f.homology_dim,
            f.homological_degree,
            f.multidegree.format_with(vars),
            render_vector(&f.witness, vars)
        )
    });
    cert.push(
        format!(
            "homology vanishes in positive degrees on all {} lattice strands",
            report.strands_checked
        ),
        report.is_resolution,
        witness,
    );
    Ok(report.is_resolution)
}

fn cells_of(q: usize) -> Vec<IndexSet> {
    subsets_by_cardinality(q).into_iter().flatten().collect()
}

fn elem_name(cell: IndexSet) -> String {
    format!("e{cell}")
}

/// Records the first counterexample of a quantified check.
struct FirstFailure {
    witness: Option<String>,
}

impl FirstFailure {
    fn new() -> Self {
        FirstFailure { witness: None }
    }

    fn note(&mut self, witness: impl FnOnce() -> String) {
        if self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self, cert: &mut Certificate, identity: &str) -> bool {
        let pass = self.witness.is_none();
        cert.push(identity, pass, self.witness);
        pass
    }
}

fn ensure_product_scale(q: usize) -> Result<()> {
    if q > PRODUCT_CHECK_MAX_GENERATORS {
        bail!(
            "exhaustive product verification enumerates all basis pairs and triples and is \
             limited to {PRODUCT_CHECK_MAX_GENERATORS} generators (got {q})"
        );
    }
    Ok(())
}

/// Exhaustively verifies the multiplication on the full simplex resolution:
/// unit, graded commutativity, the Leibniz rule, and associativity over
/// every pair and triple of basis elements.
pub fn check_taylor_dg(ideal: &MonomialIdeal, cert: &mut Certificate) -> Result<bool> {
    let q = ideal.num_generators();
    ensure_product_scale(q)?;
    let n = ideal.nvars();
    let cells = cells_of(q);
    let unit = ChainElement::unit(n);
    let mut all = true;

    let mut fail = FirstFailure::new();
    for &a in &cells {
        let ea = ChainElement::basis(n, a);
        if taylor_product(ideal, &unit, &ea)? != ea || taylor_product(ideal, &ea, &unit)? != ea {
            fail.note(|| elem_name(a));
        }
    }
    all &= fail.finish(cert, "unit: e{} ⋆ a = a ⋆ e{} = a");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ab = taylor_product(ideal, &ChainElement::basis(n, a), &ChainElement::basis(n, b))?;
            let ba = taylor_product(ideal, &ChainElement::basis(n, b), &ChainElement::basis(n, a))?;
            let expected = if (a.len() * b.len()) % 2 == 1 { -&ba } else { ba };
            if ab != expected {
                fail.note(|| format!("{} ⋆ {}", elem_name(a), elem_name(b)));
            }
        }
    }
    all &= fail.finish(cert, "graded commutativity: a ⋆ b = (-1)^(|a||b|) b ⋆ a");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ea = ChainElement::basis(n, a);
            let eb = ChainElement::basis(n, b);
            let lhs = differential(ideal, &taylor_product(ideal, &ea, &eb)?)?;
            let left = taylor_product(ideal, &differential(ideal, &ea)?, &eb)?;
            let right = taylor_product(ideal, &ea, &differential(ideal, &eb)?)?;
            let rhs = if a.len() % 2 == 1 { &left - &right } else { &left + &right };
            if lhs != rhs {
                fail.note(|| format!("{} ⋆ {}", elem_name(a), elem_name(b)));
            }
        }
    }
    all &= fail.finish(cert, "Leibniz: ∂(a ⋆ b) = ∂a ⋆ b + (-1)^|a| a ⋆ ∂b");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ab = taylor_product(ideal, &ChainElement::basis(n, a), &ChainElement::basis(n, b))?;
            for &c in &cells {
                let ec = ChainElement::basis(n, c);
                let left = taylor_product(ideal, &ab, &ec)?;
                let bc = taylor_product(ideal, &ChainElement::basis(n, b), &ec)?;
                let right = taylor_product(ideal, &ChainElement::basis(n, a), &bc)?;
                if left != right {
                    fail.note(|| {
                        format!("({} ⋆ {}) ⋆ {}", elem_name(a), elem_name(b), elem_name(c))
                    });
                }
            }
        }
    }
    all &= fail.finish(cert, "associativity: (a ⋆ b) ⋆ c = a ⋆ (b ⋆ c)");

    Ok(all)
}

/// Exhaustively verifies the multiplication on the pivot quotient for a
/// normal-form prefix `{1..l}` with gap `l+1`: the same four axioms on the
/// quotient basis, plus the projection being a multiplicative chain map.
pub fn check_pivot_dg(ideal: &MonomialIdeal, l: usize, cert: &mut Certificate) -> Result<bool> {
    let q = ideal.num_generators();
    ensure_product_scale(q)?;
    let n = ideal.nvars();
    let prefix = IndexSet::full(l);
    let all_cells = cells_of(q);
    let cells: Vec<IndexSet> =
        all_cells.iter().copied().filter(|c| !c.is_superset_of(prefix)).collect();
    let unit = ChainElement::unit(n);
    let mut all = true;

    let mut fail = FirstFailure::new();
    for &a in &cells {
        let ea = ChainElement::basis(n, a);
        if pivot_product(ideal, l, &unit, &ea)? != ea
            || pivot_product(ideal, l, &ea, &unit)? != ea
        {
            fail.note(|| elem_name(a));
        }
    }
    all &= fail.finish(cert, "quotient unit: e{} ⋆ a = a ⋆ e{} = a");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ab =
                pivot_product(ideal, l, &ChainElement::basis(n, a), &ChainElement::basis(n, b))?;
            let ba =
                pivot_product(ideal, l, &ChainElement::basis(n, b), &ChainElement::basis(n, a))?;
            let expected = if (a.len() * b.len()) % 2 == 1 { -&ba } else { ba };
            if ab != expected {
                fail.note(|| format!("{} ⋆ {}", elem_name(a), elem_name(b)));
            }
        }
    }
    all &= fail.finish(cert, "quotient graded commutativity: a ⋆ b = (-1)^(|a||b|) b ⋆ a");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ea = ChainElement::basis(n, a);
            let eb = ChainElement::basis(n, b);
            let lhs = differential(ideal, &pivot_product(ideal, l, &ea, &eb)?)?;
            let left = pivot_product(ideal, l, &differential(ideal, &ea)?, &eb)?;
            let right = pivot_product(ideal, l, &ea, &differential(ideal, &eb)?)?;
            let rhs = if a.len() % 2 == 1 { &left - &right } else { &left + &right };
            if lhs != rhs {
                fail.note(|| format!("{} ⋆ {}", elem_name(a), elem_name(b)));
            }
        }
    }
    all &= fail.finish(cert, "quotient Leibniz: ∂(a ⋆ b) = ∂a ⋆ b + (-1)^|a| a ⋆ ∂b");

    let mut fail = FirstFailure::new();
    for &a in &cells {
        for &b in &cells {
            let ab =
                pivot_product(ideal, l, &ChainElement::basis(n, a), &ChainElement::basis(n, b))?;
            for &c in &cells {
                let ec = ChainElement::basis(n, c);
                let left = pivot_product(ideal, l, &ab, &ec)?;
                let bc = pivot_product(ideal, l, &ChainElement::basis(n, b), &ec)?;
                let right = pivot_product(ideal, l, &ChainElement::basis(n, a), &bc)?;
                if left != right {
                    fail.note(|| {
                        format!("({} ⋆ {}) ⋆ {}", elem_name(a), elem_name(b), elem_name(c))
                    });
                }
            }
        }
    }
    all &= fail.finish(cert, "quotient associativity: (a ⋆ b) ⋆ c = a ⋆ (b ⋆ c)");

    let mut fail = FirstFailure::new();
    for &a in &all_cells {
        let ea = ChainElement::basis(n, a);
        let lhs = quotient_projection(ideal, l, &differential(ideal, &ea)?)?;
        let rhs = differential(ideal, &quotient_projection(ideal, l, &ea)?)?;
        if lhs != rhs {
            fail.note(|| elem_name(a));
        }
    }
    all &= fail.finish(cert, "projection is a chain map: π∘∂ = ∂∘π");

    let mut fail = FirstFailure::new();
    for &a in &all_cells {
        for &b in &all_cells {
            let ea = ChainElement::basis(n, a);
            let eb = ChainElement::basis(n, b);
            let pa = quotient_projection(ideal, l, &ea)?;
            let pb = quotient_projection(ideal, l, &eb)?;
            let lhs = pivot_product(ideal, l, &pa, &pb)?;
            let rhs = quotient_projection(ideal, l, &taylor_product(ideal, &ea, &eb)?)?;
            if lhs != rhs {
                fail.note(|| format!("{} ⋆ {}", elem_name(a), elem_name(b)));
            }
        }
    }
    all &= fail.finish(cert, "projection is multiplicative: π(a) ⋆ π(b) = π(a ⋆ b)");

    Ok(all)
}
