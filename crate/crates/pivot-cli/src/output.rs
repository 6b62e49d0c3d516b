//! Output layer: JSON documents (deterministic, round-trippable), plain-text
//! rendering of complexes and matrices, and check certificates.

use anyhow::{bail, Context, Result};
use pivot_core::arith::{Multidegree, Polynomial, Rational};
use pivot_core::combin::IndexSet;
use pivot_core::complex::{BasedComplex, BasisLabel, PolyMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::str::FromStr;

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

/// One term of a polynomial entry. The coefficient is an exact rational,
/// carried as decimal strings so arbitrary precision survives JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// One nonzero matrix entry, 0-based row/column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryDto {
    pub row: usize,
    pub col: usize,
    pub poly: Vec<TermDto>,
}

/// A differential as a sparse row-major entry list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferentialDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisElementDto {
    /// Generator indices of the cell, ascending, 1-based.
    pub cell: Vec<usize>,
    pub multidegree: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeDto {
    pub rank: usize,
    pub basis: Vec<BasisElementDto>,
}

/// A based complex: ranks and bases per homological degree, and one
/// differential per positive degree (`differentials[k]` maps degree `k+1`
/// to degree `k`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDto {
    pub degrees: Vec<DegreeDto>,
    pub differentials: Vec<DifferentialDto>,
}

fn poly_to_dto(p: &Polynomial) -> Vec<TermDto> {
    p.terms()
        .map(|(m, c)| TermDto {
            exps: m.exponents().to_vec(),
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

// The deserialization half of the document contract (exercised by the
// round-trip tests; nothing in the command set reads complexes back yet).
#[cfg_attr(not(test), allow(dead_code))]
fn poly_from_dto(nvars: usize, terms: &[TermDto]) -> Result<Polynomial> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exps.len() != nvars {
            bail!("term has {} exponents, expected {nvars}", t.exps.len());
        }
        let num = num_bigint::BigInt::from_str(&t.num)
            .with_context(|| format!("bad numerator `{}`", t.num))?;
        let den = num_bigint::BigInt::from_str(&t.den)
            .with_context(|| format!("bad denominator `{}`", t.den))?;
        if den == num_bigint::BigInt::from(0) {
            bail!("zero denominator in a serialized coefficient");
        }
        parsed.push((Multidegree::new(t.exps.clone()), Rational::new(num, den)));
    }
    Ok(Polynomial::from_terms(nvars, parsed)?)
}

/// Serializes one matrix as a sparse document (same shape as a
/// differential entry).
pub fn matrix_to_dto(m: &PolyMatrix) -> DifferentialDto {
    DifferentialDto {
        rows: m.rows(),
        cols: m.cols(),
        entries: m
            .entries()
            .map(|(row, col, poly)| EntryDto { row, col, poly: poly_to_dto(poly) })
            .collect(),
    }
}

pub fn complex_to_dto(complex: &BasedComplex) -> ComplexDto {
    let degrees = complex
        .bases()
        .iter()
        .map(|basis| DegreeDto {
            rank: basis.len(),
            basis: basis
                .iter()
                .map(|label| BasisElementDto {
                    cell: label.cell.elements(),
                    multidegree: label.degree.exponents().to_vec(),
                })
                .collect(),
        })
        .collect();
    let differentials = complex.differentials().iter().map(matrix_to_dto).collect();
    ComplexDto { degrees, differentials }
}

/// Rebuilds a certified complex from its JSON form. The number of variables
/// is read off the multidegrees.
#[cfg_attr(not(test), allow(dead_code))]
pub fn complex_from_dto(dto: &ComplexDto) -> Result<BasedComplex> {
    let nvars = dto
        .degrees
        .iter()
        .flat_map(|d| d.basis.iter())
        .map(|b| b.multidegree.len())
        .next()
        .context("complex document has no basis elements")?;

    let mut bases = Vec::with_capacity(dto.degrees.len());
    for degree in &dto.degrees {
        if degree.rank != degree.basis.len() {
            bail!("declared rank {} does not match {} basis elements", degree.rank, degree.basis.len());
        }
        let mut labels = Vec::with_capacity(degree.basis.len());
        for b in &degree.basis {
            let mut cell = IndexSet::EMPTY;
            for &i in &b.cell {
                cell = cell.with(i);
            }
            if b.multidegree.len() != nvars {
                bail!("basis multidegree has {} entries, expected {nvars}", b.multidegree.len());
            }
            labels.push(BasisLabel { cell, degree: Multidegree::new(b.multidegree.clone()) });
        }
        bases.push(labels);
    }

    let mut diffs = Vec::with_capacity(dto.differentials.len());
    for d in &dto.differentials {
        let mut m = PolyMatrix::zero(d.rows, d.cols);
        for e in &d.entries {
            if e.row >= d.rows || e.col >= d.cols {
                bail!("entry ({}, {}) outside a {} x {} matrix", e.row, e.col, d.rows, d.cols);
            }
            m.set(e.row, e.col, poly_from_dto(nvars, &e.poly)?);
        }
        diffs.push(m);
    }

    Ok(BasedComplex::new(nvars, bases, diffs)?)
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// One named check inside a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDto {
    pub identity: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Record of a verification run: what was checked, over which inputs, by
/// which tool version.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub command: String,
    pub inputs_digest: String,
    pub tool_version: String,
    pub checks: Vec<CheckDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    pub fn new(command: String, input_files: &[&[u8]]) -> Self {
        Certificate {
            command,
            inputs_digest: digest(input_files),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            checks: Vec::new(),
            note: None,
        }
    }

    pub fn push(&mut self, identity: impl Into<String>, pass: bool, witness: Option<String>) {
        self.checks.push(CheckDto { identity: identity.into(), pass, witness });
    }

    pub fn add_note(&mut self, note: &str) {
        match &mut self.note {
            Some(existing) => {
                existing.push_str("; ");
                existing.push_str(note);
            }
            None => self.note = Some(note.to_string()),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("inputs: {}\n", self.inputs_digest));
        out.push_str(&format!("tool version: {}\n", self.tool_version));
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        for check in &self.checks {
            let verdict = if check.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("[{verdict}] {}\n", check.identity));
            if let Some(witness) = &check.witness {
                out.push_str(&format!("       {witness}\n"));
            }
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.all_pass() { "all checks passed" } else { "checks failed" }
        ));
        out
    }
}

/// SHA-256 over the concatenated raw input files, formatted `sha256:<hex>`.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for chunk in inputs {
        hasher.update(chunk);
    }
    format!("sha256:{:x}", hasher.finalize())
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

pub fn cell_string(cell: IndexSet) -> String {
    format!("{cell}")
}

/// Renders a matrix as a labeled grid: columns are the source basis,
/// rows the target basis.
pub fn render_matrix(
    matrix: &PolyMatrix,
    row_labels: &[String],
    col_labels: &[String],
    vars: &[String],
) -> String {
    assert_eq!(matrix.rows(), row_labels.len());
    assert_eq!(matrix.cols(), col_labels.len());

    let mut cells: Vec<Vec<String>> = Vec::with_capacity(matrix.rows());
    for row in 0..matrix.rows() {
        let mut line = Vec::with_capacity(matrix.cols());
        for col in 0..matrix.cols() {
            let text = match matrix.get(row, col) {
                Some(p) => p.format_with(vars),
                None => "0".to_string(),
            };
            line.push(text);
        }
        cells.push(line);
    }

    let label_width = row_labels.iter().map(String::len).max().unwrap_or(0);
    let mut col_widths: Vec<usize> = col_labels.iter().map(String::len).collect();
    for line in &cells {
        for (col, text) in line.iter().enumerate() {
            col_widths[col] = col_widths[col].max(text.len());
        }
    }

    let mut out = String::new();
    out.push_str(&" ".repeat(label_width + 2));
    for (col, label) in col_labels.iter().enumerate() {
        out.push_str(&format!("{label:>width$}  ", width = col_widths[col]));
    }
    out.push('\n');
    for (row, line) in cells.iter().enumerate() {
        out.push_str(&format!("{:>label_width$}  ", row_labels[row]));
        for (col, text) in line.iter().enumerate() {
            out.push_str(&format!("{text:>width$}  ", width = col_widths[col]));
        }
        out.push('\n');
    }
    out
}

/// Renders a complex: ranks, per-degree bases, and each differential as a
/// labeled grid.
pub fn render_complex(complex: &BasedComplex, vars: &[String]) -> String {
    let mut out = String::new();
    let ranks: Vec<String> = complex.ranks().iter().map(|r| r.to_string()).collect();
    out.push_str(&format!("ranks: {}\n", ranks.join(" ")));

    for (degree, basis) in complex.bases().iter().enumerate() {
        out.push_str(&format!("\ndegree {degree} (rank {}):\n", basis.len()));
        for label in basis {
            out.push_str(&format!(
                "  {}  multidegree {}\n",
                cell_string(label.cell),
                label.degree.format_with(vars)
            ));
        }
    }

    for degree in 1..=complex.top_degree() {
        let matrix = complex.differential(degree);
        let row_labels: Vec<String> =
            complex.basis(degree - 1).iter().map(|l| cell_string(l.cell)).collect();
        let col_labels: Vec<String> =
            complex.basis(degree).iter().map(|l| cell_string(l.cell)).collect();
        out.push_str(&format!(
            "\nd_{degree}: degree {degree} -> degree {} ({} x {})\n",
            degree - 1,
            matrix.rows(),
            matrix.cols()
        ));
        out.push_str(&render_matrix(matrix, &row_labels, &col_labels, vars));
    }
    out
}

/// Renders a vector of polynomials as `(p_1, p_2, ...)`.
pub fn render_vector(entries: &[Polynomial], vars: &[String]) -> String {
    let parts: Vec<String> = entries.iter().map(|p| p.format_with(vars)).collect();
    format!("({})", parts.join(", "))
}

/// Prints a serializable document as deterministic pretty JSON.
pub fn print_json<T: Serialize>(doc: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    println!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pivot_core::resolutions::{taylor_resolution, MonomialIdeal};

    fn md(exps: &[u32]) -> Multidegree {
        Multidegree::new(exps.to_vec())
    }

    #[test]
    fn complex_round_trips_through_the_dto() {
        let ideal = MonomialIdeal::new(
            4,
            vec![md(&[1, 1, 0, 0]), md(&[0, 1, 1, 0]), md(&[0, 0, 1, 1])],
        )
        .unwrap();
        let complex = taylor_resolution(&ideal).unwrap();
        let dto = complex_to_dto(&complex);
        let json = serde_json::to_string(&dto).unwrap();
        let back: ComplexDto = serde_json::from_str(&json).unwrap();
        let rebuilt = complex_from_dto(&back).unwrap();
        assert_eq!(rebuilt, complex);
    }

    #[test]
    fn digest_is_stable_and_prefixed() {
        let d = digest(&[b"vars: x\n", b"gens: x\n"]);
        assert!(d.starts_with("sha256:"));
        assert_eq!(d, digest(&[b"vars: x\ngens: x\n"]));
        assert_ne!(d, digest(&[b"vars: y\n"]));
    }

    #[test]
    fn matrix_rendering_labels_columns_by_source() {
        let ideal = MonomialIdeal::new(2, vec![md(&[1, 0]), md(&[0, 1])]).unwrap();
        let complex = taylor_resolution(&ideal).unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        let text = render_complex(&complex, &vars);
        assert!(text.contains("ranks: 1 2 1"));
        assert!(text.contains("{1,2}"));
        assert!(text.contains("d_2"));
    }
}
