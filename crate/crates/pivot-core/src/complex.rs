//! Based multigraded complexes of free modules and the exact linear algebra
//! used to certify them.
//!
//! A [`BasedComplex`] stores, per homological degree, a list of labeled basis
//! elements and, between consecutive degrees, a sparse matrix of polynomial
//! entries. Construction through [`BasedComplex::new`] certifies the two
//! structural invariants — every entry is homogeneous for the multigrading
//! and consecutive differentials compose to zero — so downstream algorithms
//! may rely on them.
//!
//! Exactness is decided by restricting the complex to multidegree strands
//! ([`strand`]) and computing ranks of the resulting scalar matrices with
//! fraction-free elimination ([`RatMatrix::rank`]). Restricting to the finite
//! lcm lattice suffices: the strand at any multidegree is isomorphic to the
//! strand at the largest lattice degree below it, since basis membership only
//! depends on which generator lcms divide the degree.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{Multidegree, Polynomial, Rational};
use crate::combin::IndexSet;
use crate::error::{Error, Result};
use crate::resolutions::{Limits, MonomialIdeal};

/// One basis element: the index set labeling it and its multidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisLabel {
    pub cell: IndexSet,
    pub degree: Multidegree,
}

/// Sparse matrix of polynomial entries; zero entries are never stored.
///
/// Entries iterate in row-major order (rows ascending, columns ascending
/// within a row), which fixes serialization and scan orders everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Polynomial>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize, value: Polynomial) {
        assert!(row < self.rows && col < self.cols, "entry out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &Polynomial) {
        assert!(row < self.rows && col < self.cols, "entry out of range");
        match self.entries.get_mut(&(row, col)) {
            Some(present) => {
                let sum = &*present + value;
                if sum.is_zero() {
                    self.entries.remove(&(row, col));
                } else {
                    *present = sum;
                }
            }
            None => {
                if !value.is_zero() {
                    self.entries.insert((row, col), value.clone());
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Polynomial> {
        self.entries.get(&(row, col))
    }

    /// Row-major iteration over nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries.iter().map(|(&(r, c), p)| (r, c, p))
    }

    pub fn column_entries(&self, col: usize) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.entries
            .iter()
            .filter(move |(&(_, c), _)| c == col)
            .map(|(&(r, _), p)| (r, p))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Structural(format!(
                "matrix product shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.rows, rhs.cols);
        // Group the right factor by row so each left entry meets only the
        // rows it can combine with.
        let mut rhs_by_row: BTreeMap<usize, Vec<(usize, &Polynomial)>> = BTreeMap::new();
        for (r, c, p) in rhs.entries() {
            rhs_by_row.entry(r).or_default().push((c, p));
        }
        for (r, k, left) in self.entries() {
            if let Some(row) = rhs_by_row.get(&k) {
                for &(c, right) in row {
                    out.add_to(r, c, &(left * right));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Structural(format!(
                "matrix sum shape mismatch: {}x{} plus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (r, c, p) in rhs.entries() {
            out.add_to(r, c, p);
        }
        Ok(out)
    }

    pub fn scaled_identity(n: usize, value: &Polynomial) -> Self {
        let mut out = PolyMatrix::zero(n, n);
        for i in 0..n {
            out.set(i, i, value.clone());
        }
        out
    }

    pub fn negated(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.rows, self.cols);
        for (r, c, p) in self.entries() {
            out.set(r, c, -p);
        }
        out
    }

    /// Copy with one row and one column removed, remaining indices shifted.
    fn without_row_col(&self, row: Option<usize>, col: Option<usize>) -> PolyMatrix {
        let rows = self.rows - usize::from(row.is_some());
        let cols = self.cols - usize::from(col.is_some());
        let mut out = PolyMatrix::zero(rows, cols);
        for (r, c, p) in self.entries() {
            if Some(r) == row || Some(c) == col {
                continue;
            }
            let nr = r - usize::from(row.is_some_and(|x| r > x));
            let nc = c - usize::from(col.is_some_and(|x| c > x));
            out.set(nr, nc, p.clone());
        }
        out
    }
}

/// Dense matrix over the rationals, used for strand computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "scalar matrix product shape mismatch");
        let mut out = RatMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let left = self.get(r, k);
                if left.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let right = rhs.get(k, c);
                    if right.is_zero() {
                        continue;
                    }
                    let sum = out.get(r, c) + left * right;
                    out.set(r, c, sum);
                }
            }
        }
        out
    }

    /// Rank by fraction-free (Bareiss) elimination: rows are scaled to
    /// integers, then eliminated with the two-by-two determinant update and
    /// exact division by the previous pivot. Pivots are the first nonzero
    /// entry found scanning the remaining rows of each column in order.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let scale = (0..self.cols)
                    .map(|c| self.get(r, c).denom().clone())
                    .fold(BigInt::one(), |acc, d| acc.lcm(&d));
                (0..self.cols)
                    .map(|c| {
                        let e = self.get(r, c);
                        e.numer() * (&scale / e.denom())
                    })
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot_row) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot_row);
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let numerator = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                    debug_assert!((&numerator % &prev).is_zero(), "Bareiss division not exact");
                    m[r][c] = numerator / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns, by straightforward
    /// rational Gauss-Jordan elimination. Slower than [`RatMatrix::rank`] but
    /// yields solution structure; also serves as an independent rank oracle.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for col in 0..m.cols {
                m.data.swap(r * m.cols + col, p * m.cols + col);
            }
            let inv = m.get(r, c).recip();
            for col in 0..m.cols {
                let scaled = m.get(r, col) * &inv;
                m.set(r, col, scaled);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for col in 0..m.cols {
                    let updated = m.get(i, col) - &factor * m.get(r, col);
                    m.set(i, col, updated);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel, one vector per free column, in ascending
    /// free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (reduced, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Whether `v` lies in the span of the columns, decided by comparing the
    /// rank of the matrix against the rank of the augmented matrix.
    pub fn column_span_contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        let mut augmented = RatMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                augmented.set(r, c, self.get(r, c).clone());
            }
            augmented.set(r, self.cols, v[r].clone());
        }
        augmented.rank() == self.rank()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &v[c])
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }
}

/// A complex of free modules with labeled bases and certified invariants.
///
/// `bases[i]` lists the degree-`i` basis; `diffs[i]` is the matrix of the
/// differential from degree `i+1` to degree `i` (rows indexed by the lower
/// basis, columns by the upper one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    nvars: usize,
    bases: Vec<Vec<BasisLabel>>,
    diffs: Vec<PolyMatrix>,
}

impl BasedComplex {
    /// Builds a complex and certifies both invariants: every entry
    /// homogeneous for the multigrading, and d ∘ d = 0, by exact arithmetic.
    pub fn new(
        nvars: usize,
        bases: Vec<Vec<BasisLabel>>,
        diffs: Vec<PolyMatrix>,
    ) -> Result<Self> {
        let complex = Self::new_unchecked(nvars, bases, diffs);
        complex.validate_shape()?;
        complex.validate_multigraded()?;
        let report = check_d_squared(&complex)?;
        if let Some(offense) = report.offense {
            return Err(Error::DSquared {
                degree: offense.into_degree,
                row: offense.row,
                col: offense.col,
            });
        }
        Ok(complex)
    }

    /// Stores the data without certification. Intended for deserialized
    /// input that will be run through [`check_d_squared`] and friends;
    /// algorithms in this crate assume certified complexes.
    pub fn new_unchecked(
        nvars: usize,
        bases: Vec<Vec<BasisLabel>>,
        diffs: Vec<PolyMatrix>,
    ) -> Self {
        BasedComplex {
            nvars,
            bases,
            diffs,
        }
    }

    fn validate_shape(&self) -> Result<()> {
        if self.bases.is_empty() {
            return Err(Error::Structural(
                "a complex needs at least one homological degree".into(),
            ));
        }
        if self.diffs.len() + 1 != self.bases.len() {
            return Err(Error::Structural(format!(
                "{} differentials do not fit {} degrees",
                self.diffs.len(),
                self.bases.len()
            )));
        }
        for (i, labels) in self.bases.iter().enumerate() {
            for label in labels {
                if label.degree.nvars() != self.nvars {
                    return Err(Error::DimensionMismatch {
                        left: self.nvars,
                        right: label.degree.nvars(),
                    });
                }
            }
            if i < self.diffs.len() {
                let d = &self.diffs[i];
                if d.rows() != labels.len() || d.cols() != self.bases[i + 1].len() {
                    return Err(Error::Structural(format!(
                        "differential into degree {i} is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        labels.len(),
                        self.bases[i + 1].len()
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_multigraded(&self) -> Result<()> {
        for (i, d) in self.diffs.iter().enumerate() {
            for (r, c, p) in d.entries() {
                let row_deg = &self.bases[i][r].degree;
                let col_deg = &self.bases[i + 1][c].degree;
                for (term_deg, _) in p.terms() {
                    if term_deg.sum(row_deg)? != *col_deg {
                        return Err(Error::Structural(format!(
                            "entry ({r}, {c}) of the differential into degree {i} \
                             is not homogeneous for the multigrading"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Highest homological degree carried (possibly with an empty basis).
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, degree: usize) -> &[BasisLabel] {
        &self.bases[degree]
    }

    pub fn bases(&self) -> &[Vec<BasisLabel>] {
        &self.bases
    }

    /// Matrix of the differential out of `degree` (valid for `degree >= 1`).
    pub fn differential(&self, degree: usize) -> &PolyMatrix {
        assert!(
            degree >= 1 && degree <= self.top_degree(),
            "no differential out of degree {degree}"
        );
        &self.diffs[degree - 1]
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.diffs
    }

    /// Position of the basis element labeled by `cell` at the given degree.
    pub fn find_basis(&self, degree: usize, cell: IndexSet) -> Option<usize> {
        self.bases
            .get(degree)?
            .iter()
            .position(|label| label.cell == cell)
    }
}

/// Outcome of composing consecutive differentials.
#[derive(Clone, Debug)]
pub struct DSquaredReport {
    pub pass: bool,
    pub offense: Option<DSquaredOffense>,
}

/// First nonzero entry of a composite differential.
#[derive(Clone, Debug)]
pub struct DSquaredOffense {
    /// Homological degree the composite lands in.
    pub into_degree: usize,
    pub row: usize,
    pub col: usize,
    pub value: Polynomial,
}

/// Multiplies every consecutive pair of differentials and reports the first
/// nonzero entry of any composite, if one exists.
pub fn check_d_squared(complex: &BasedComplex) -> Result<DSquaredReport> {
    for into_degree in 0..complex.diffs.len().saturating_sub(1) {
        let product = complex.diffs[into_degree].mul(&complex.diffs[into_degree + 1])?;
        let first = product
            .entries()
            .next()
            .map(|(row, col, value)| (row, col, value.clone()));
        if let Some((row, col, value)) = first {
            return Ok(DSquaredReport {
                pass: false,
                offense: Some(DSquaredOffense {
                    into_degree,
                    row,
                    col,
                    value,
                }),
            });
        }
    }
    Ok(DSquaredReport {
        pass: true,
        offense: None,
    })
}

/// All distinct lcm multidegrees of nonempty generator subsets.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> Result<Vec<Multidegree>> {
    lcm_lattice_with_limits(ideal, &Limits::default())
}

pub fn lcm_lattice_with_limits(
    ideal: &MonomialIdeal,
    limits: &Limits,
) -> Result<Vec<Multidegree>> {
    let q = ideal.num_generators();
    let needed = 1u128 << q;
    if needed > u128::from(limits.max_cells) {
        return Err(Error::CellLimit {
            needed,
            limit: u128::from(limits.max_cells),
        });
    }
    let mut lattice = BTreeSet::new();
    for mask in 1..(1u64 << q) {
        lattice.insert(ideal.lcm_of(IndexSet::from_mask(mask)));
    }
    Ok(lattice.into_iter().collect())
}

/// Restriction of a complex to one multidegree strand: the scalar complex
/// spanned by basis elements whose degree divides `a`.
#[derive(Clone, Debug)]
pub struct StrandComplex {
    pub multidegree: Multidegree,
    /// Per homological degree, the indices (into the parent basis) that
    /// survive the divisibility filter.
    pub surviving: Vec<Vec<usize>>,
    /// `matrices[i]` maps strand degree `i+1` to strand degree `i`.
    pub matrices: Vec<RatMatrix>,
}

impl StrandComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.surviving.iter().map(Vec::len).collect()
    }
}

/// Extracts the strand of `complex` at multidegree `a`. Requires a certified
/// multigraded complex; each retained entry is the scalar coefficient of the
/// unique monomial the grading allows.
pub fn strand(complex: &BasedComplex, a: &Multidegree) -> Result<StrandComplex> {
    if a.nvars() != complex.nvars {
        return Err(Error::DimensionMismatch {
            left: complex.nvars,
            right: a.nvars(),
        });
    }
    let mut surviving: Vec<Vec<usize>> = Vec::with_capacity(complex.bases.len());
    for labels in &complex.bases {
        let mut kept = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            if label.degree.divides(a)? {
                kept.push(i);
            }
        }
        surviving.push(kept);
    }
    let mut matrices = Vec::with_capacity(complex.diffs.len());
    for (i, d) in complex.diffs.iter().enumerate() {
        let rows = &surviving[i];
        let cols = &surviving[i + 1];
        let row_pos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(pos, &idx)| (idx, pos)).collect();
        let col_pos: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(pos, &idx)| (idx, pos)).collect();
        let mut m = RatMatrix::zero(rows.len(), cols.len());
        for (r, c, p) in d.entries() {
            let (Some(&rp), Some(&cp)) = (row_pos.get(&r), col_pos.get(&c)) else {
                continue;
            };
            let row_deg = &complex.bases[i][r].degree;
            let col_deg = &complex.bases[i + 1][c].degree;
            if let Ok(term_deg) = col_deg.quotient(row_deg) {
                m.set(rp, cp, p.coefficient(&term_deg));
            }
        }
        matrices.push(m);
    }
    Ok(StrandComplex {
        multidegree: a.clone(),
        surviving,
        matrices,
    })
}

/// Homology dimensions of a strand, degree by degree:
/// `dim H_i = dim ker(out of i) − rank(into i)`. Verifies d² = 0 on the
/// strand first and treats a violation as a contract error.
pub fn homology_dims(strand: &StrandComplex) -> Result<Vec<usize>> {
    for i in 0..strand.matrices.len().saturating_sub(1) {
        if !strand.matrices[i].mul(&strand.matrices[i + 1]).is_zero() {
            return Err(Error::DSquared {
                degree: i,
                row: 0,
                col: 0,
            });
        }
    }
    let degrees = strand.surviving.len();
    let mut dims = Vec::with_capacity(degrees);
    for i in 0..degrees {
        let rank_here = strand.surviving[i].len();
        let out_rank = if i >= 1 {
            strand.matrices[i - 1].rank()
        } else {
            0
        };
        let in_rank = if i < strand.matrices.len() {
            strand.matrices[i].rank()
        } else {
            0
        };
        dims.push(rank_here - out_rank - in_rank);
    }
    Ok(dims)
}

/// A cycle at one strand degree that is not a boundary, in strand
/// coordinates; `None` when the homology there vanishes.
pub fn homology_witness(strand: &StrandComplex, degree: usize) -> Option<Vec<Rational>> {
    let kernel = if degree == 0 {
        let n = strand.surviving[0].len();
        (0..n)
            .map(|j| {
                let mut v = vec![Rational::zero(); n];
                v[j] = Rational::one();
                v
            })
            .collect()
    } else {
        strand.matrices[degree - 1].kernel_basis()
    };
    let boundary = strand.matrices.get(degree);
    kernel.into_iter().find(|v| match boundary {
        Some(b) => !b.column_span_contains(v),
        None => !v.iter().all(Rational::is_zero),
    })
}

/// Verdict of the exactness check of a complex against its ideal.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub is_resolution: bool,
    /// Number of lattice multidegrees whose strands were checked.
    pub strands_checked: usize,
    pub failure: Option<ExactnessFailure>,
}

/// First strand with nonvanishing positive-degree homology.
#[derive(Clone, Debug)]
pub struct ExactnessFailure {
    pub multidegree: Multidegree,
    pub homological_degree: usize,
    pub homology_dim: usize,
    /// The witness cycle in full-module coordinates: one polynomial
    /// coefficient per basis element of the failing homological degree.
    pub witness: Vec<Polynomial>,
}

/// Scope note attached to exactness certificates: strands exist at every
/// multidegree, but any strand is isomorphic to the strand at the largest
/// lattice element dividing its degree, so the finite lcm lattice decides
/// exactness everywhere.
pub const EXACTNESS_SCOPE_NOTE: &str =
    "exactness verified on all lcm-lattice multidegrees; strands at other degrees \
     are isomorphic to lattice strands";

/// Decides whether `complex` resolves the quotient by `ideal`: the degree-0
/// structure must present the quotient (single empty-cell generator, first
/// differential columns carrying exactly the generator monomials), and every
/// lcm-lattice strand must be exact in positive degrees.
pub fn is_resolution(complex: &BasedComplex, ideal: &MonomialIdeal) -> Result<ExactnessReport> {
    validate_presentation(complex, ideal)?;
    let lattice = lcm_lattice(ideal)?;
    let strands_checked = lattice.len();
    for a in &lattice {
        let s = strand(complex, a)?;
        let dims = homology_dims(&s)?;
        for (degree, &dim) in dims.iter().enumerate().skip(1) {
            if dim == 0 {
                continue;
            }
            let witness_strand = homology_witness(&s, degree)
                .expect("nonzero homology has a witness");
            let witness = lift_strand_vector(complex, &s, degree, &witness_strand);
            return Ok(ExactnessReport {
                is_resolution: false,
                strands_checked,
                failure: Some(ExactnessFailure {
                    multidegree: a.clone(),
                    homological_degree: degree,
                    homology_dim: dim,
                    witness,
                }),
            });
        }
    }
    Ok(ExactnessReport {
        is_resolution: true,
        strands_checked,
        failure: None,
    })
}

/// Structural degree-0 check: basis `{ε_∅}` and first differential columns
/// carrying `±(generator monomial)` on singleton cells.
fn validate_presentation(complex: &BasedComplex, ideal: &MonomialIdeal) -> Result<()> {
    if complex.nvars() != ideal.nvars() {
        return Err(Error::DimensionMismatch {
            left: complex.nvars(),
            right: ideal.nvars(),
        });
    }
    let zero_basis = complex.basis(0);
    if zero_basis.len() != 1
        || !zero_basis[0].cell.is_empty()
        || !zero_basis[0].degree.is_zero()
    {
        return Err(Error::Structural(
            "degree 0 must be spanned by the empty cell in multidegree 0".into(),
        ));
    }
    if complex.top_degree() == 0 {
        return Err(Error::Structural(
            "complex has no first differential to present the ideal".into(),
        ));
    }
    let d1 = complex.differential(1);
    for (col, label) in complex.basis(1).iter().enumerate() {
        let Some(entry) = d1.get(0, col) else {
            return Err(Error::Structural(format!(
                "first differential column {col} is zero"
            )));
        };
        let elements = label.cell.elements();
        let ok = elements.len() == 1
            && elements[0] <= ideal.num_generators()
            && *ideal.generator(elements[0]) == label.degree
            && entry.num_terms() == 1
            && entry
                .terms()
                .all(|(deg, coeff)| *deg == label.degree && (coeff.is_one() || (-coeff).is_one()));
        if !ok {
            return Err(Error::Structural(format!(
                "first differential column {col} does not carry a generator monomial"
            )));
        }
    }
    Ok(())
}

/// Expands a strand-coordinate vector at `degree` into full-module
/// coordinates: each scalar becomes (scalar) · x^{a − basis degree} on its
/// basis element.
pub fn lift_strand_vector(
    complex: &BasedComplex,
    strand: &StrandComplex,
    degree: usize,
    v: &[Rational],
) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::zero(complex.nvars()); complex.basis(degree).len()];
    for (pos, &idx) in strand.surviving[degree].iter().enumerate() {
        if v[pos].is_zero() {
            continue;
        }
        let shift = strand
            .multidegree
            .quotient(&complex.basis(degree)[idx].degree)
            .expect("surviving labels divide the strand degree");
        out[idx] = Polynomial::term(shift, v[pos].clone());
    }
    out
}

/// Order in which minimalization scans for cancelable scalar entries; two
/// deliberately different orders let tests confirm the Betti numbers do not
/// depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CancelOrder {
    /// Lowest homological degree first, row-major within each matrix.
    DegreeAscending,
    /// Highest homological degree first, reversed row-major within each.
    DegreeDescending,
}

/// Gaussian reduction of a complex: repeatedly cancels a basis pair joined
/// by a nonzero scalar entry until none remain, then trims trailing empty
/// degrees. Returns the reduced complex (re-certified) and its ranks — the
/// Betti numbers when the input was a resolution.
pub fn minimalize(complex: &BasedComplex) -> Result<(BasedComplex, Vec<usize>)> {
    minimalize_with(complex, CancelOrder::DegreeAscending)
}

pub fn minimalize_with(
    complex: &BasedComplex,
    order: CancelOrder,
) -> Result<(BasedComplex, Vec<usize>)> {
    let mut bases = complex.bases.clone();
    let mut diffs = complex.diffs.clone();

    while let Some((k, row, col)) = find_scalar_entry(&diffs, order) {
        cancel_pair(&mut bases, &mut diffs, k, row, col);
    }

    while bases.len() > 1 && bases.last().is_some_and(Vec::is_empty) {
        bases.pop();
        diffs.pop();
    }

    let betti = bases.iter().map(Vec::len).collect();
    let reduced = BasedComplex::new(complex.nvars, bases, diffs)?;
    Ok((reduced, betti))
}

/// Locates the next entry that is a nonzero constant, under the given scan
/// order. Returns (differential index k, row, col) with the convention that
/// `diffs[k]` maps degree k+1 to degree k.
fn find_scalar_entry(diffs: &[PolyMatrix], order: CancelOrder) -> Option<(usize, usize, usize)> {
    let is_scalar = |p: &Polynomial| p.constant_value().is_some_and(|c| !c.is_zero());
    match order {
        CancelOrder::DegreeAscending => diffs.iter().enumerate().find_map(|(k, d)| {
            d.entries()
                .find(|(_, _, p)| is_scalar(p))
                .map(|(r, c, _)| (k, r, c))
        }),
        CancelOrder::DegreeDescending => diffs.iter().enumerate().rev().find_map(|(k, d)| {
            d.entries()
                .filter(|(_, _, p)| is_scalar(p))
                .last()
                .map(|(r, c, _)| (k, r, c))
        }),
    }
}

/// Cancels the basis pair (degree k element `row`, degree k+1 element `col`)
/// across the three affected matrices. With the scalar entry a at (row, col)
/// and the updated block D' = D − (column)·(row)/a, the composites with the
/// neighbouring differentials stay zero, so the neighbours only need the
/// corresponding row or column deleted.
fn cancel_pair(
    bases: &mut [Vec<BasisLabel>],
    diffs: &mut [PolyMatrix],
    k: usize,
    row: usize,
    col: usize,
) {
    let pivot = diffs[k]
        .get(row, col)
        .and_then(Polynomial::constant_value)
        .expect("cancellation target must be scalar");
    let inverse = pivot.recip();

    let column: Vec<(usize, Polynomial)> = diffs[k]
        .column_entries(col)
        .filter(|&(r, _)| r != row)
        .map(|(r, p)| (r, p.clone()))
        .collect();
    let row_entries: Vec<(usize, Polynomial)> = diffs[k]
        .entries()
        .filter(|&(r, c, _)| r == row && c != col)
        .map(|(_, c, p)| (c, p.clone()))
        .collect();
    for (r, col_val) in &column {
        for (c, row_val) in &row_entries {
            let correction = -(&(col_val * row_val).scaled(&inverse));
            diffs[k].add_to(*r, *c, &correction);
        }
    }

    diffs[k] = diffs[k].without_row_col(Some(row), Some(col));
    if k >= 1 {
        diffs[k - 1] = diffs[k - 1].without_row_col(None, Some(row));
    }
    if k + 1 < diffs.len() {
        diffs[k + 1] = diffs[k + 1].without_row_col(Some(col), None);
    }
    bases[k].remove(row);
    bases[k + 1].remove(col);
}
