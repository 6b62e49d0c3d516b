//! Shared corpus of small monomial ideals and a deterministic RNG for the
//! integration suites. Every ideal here has at most five generators so that
//! exhaustive checks over subsets, pairs, and triples of cells stay cheap.
#![allow(dead_code)] // each test target compiles its own copy and uses a subset

use pivot_core::arith::{ratio, rational, Multidegree, Polynomial};
use pivot_core::combin::IndexSet;
use pivot_core::homotopy::CIData;
use pivot_core::resolutions::MonomialIdeal;

pub fn md(exps: &[u32]) -> Multidegree {
    Multidegree::new(exps.to_vec())
}

pub fn mono(exps: &[u32]) -> Polynomial {
    Polynomial::term(md(exps), rational(1))
}

pub fn set(elements: &[usize]) -> IndexSet {
    elements.iter().fold(IndexSet::EMPTY, |acc, &e| acc.with(e))
}

pub fn ideal(nvars: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(nvars, gens.iter().map(|g| md(g)).collect())
        .expect("corpus generators are minimal")
}

/// (wx, xy, yz) in Q[w,x,y,z]: the edge ideal of a path on four vertices.
pub fn path3() -> MonomialIdeal {
    ideal(4, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]])
}

/// (x1^2, x2^2, x3^2, x1*x2*x3): four generators whose last divides the
/// lcm of the first three.
pub fn squares4() -> MonomialIdeal {
    ideal(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 1]])
}

/// (wx, xy, yz, wz) in Q[u,w,x,y,z]: the edge ideal of a four-cycle,
/// embedded in five variables (u is unused by the generators).
pub fn cycle4() -> MonomialIdeal {
    ideal(
        5,
        &[
            &[0, 1, 1, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1],
            &[0, 1, 0, 0, 1],
        ],
    )
}

/// (u, wx, xy, yz) in Q[u,w,x,y,z]: a variable adjoined to a path.
pub fn cone4() -> MonomialIdeal {
    ideal(
        5,
        &[
            &[1, 0, 0, 0, 0],
            &[0, 1, 1, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1],
        ],
    )
}

/// (x^2, y^2, xy): the pivot normal form with pivot {1,2} and gap 3.
pub fn squares_normal() -> MonomialIdeal {
    ideal(2, &[&[2, 0], &[0, 2], &[1, 1]])
}

/// The corpus: name and ideal, covering principal, coprime, path, cycle,
/// cone, power, and gap-rich shapes with two to five generators.
pub fn corpus() -> Vec<(&'static str, MonomialIdeal)> {
    vec![
        ("principal", ideal(1, &[&[1]])),
        ("two-squares", ideal(2, &[&[2, 0], &[0, 2]])),
        ("squares-normal", squares_normal()),
        ("three-coprime", ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
        ("path3", path3()),
        ("squares4", squares4()),
        ("cycle4", cycle4()),
        ("cone4", cone4()),
        (
            "powers4",
            ideal(2, &[&[3, 0], &[2, 1], &[1, 2], &[0, 3]]),
        ),
        (
            "cycle5",
            ideal(
                5,
                &[
                    &[1, 1, 0, 0, 0],
                    &[0, 1, 1, 0, 0],
                    &[0, 0, 1, 1, 0],
                    &[0, 0, 0, 1, 1],
                    &[1, 0, 0, 0, 1],
                ],
            ),
        ),
    ]
}

/// xorshift64*: small, seedable, and good enough for generating test data.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform draw from 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random complete-intersection data over `ideal`: r nonzero elements, each
/// a combination of the generators with scalar-or-monomial coefficients.
pub fn random_ci(rng: &mut Rng, ideal: &MonomialIdeal, r: usize) -> CIData {
    let q = ideal.num_generators();
    let nvars = ideal.nvars();
    let mut elements = Vec::with_capacity(r);
    let mut rows = Vec::with_capacity(r);
    for _ in 0..r {
        loop {
            let mut row = Vec::with_capacity(q);
            for _ in 0..q {
                if rng.below(2) == 0 {
                    row.push(Polynomial::zero(nvars));
                    continue;
                }
                let exps: Vec<u32> = (0..nvars).map(|_| rng.below(3) as u32).collect();
                let coeff = match rng.below(4) {
                    0 => rational(1),
                    1 => rational(-1),
                    2 => rational(2),
                    _ => ratio(1, 2),
                };
                row.push(Polynomial::term(Multidegree::new(exps), coeff));
            }
            let element = row.iter().enumerate().fold(
                Polynomial::zero(nvars),
                |acc, (j, c)| {
                    let generator =
                        Polynomial::term(ideal.generator(j + 1).clone(), rational(1));
                    &acc + &(c * &generator)
                },
            );
            if element.is_zero() {
                continue;
            }
            elements.push(element);
            rows.push(row);
            break;
        }
    }
    CIData::new(ideal, elements, rows).expect("rows rebuild their elements by construction")
}
