//! Linking forms of plumbing graphs and their exact invariants.
//!
//! Everything here is exact. The determinant and signature both come out of a
//! single congruence diagonalization over the rationals; the Wu class is a
//! linear solve over the two-element field.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};

/// Symmetric integer matrix of a plumbing, rows ordered by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    ids: Vec<VertexId>,
    entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    /// Wraps a square symmetric matrix with synthetic row labels `0..n`.
    pub fn from_rows(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, other) in entries.iter().enumerate().take(i) {
                if row[j] != other[i] {
                    return Err(Error::Domain(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let ids = (0..n).map(|i| VertexId::new(format!("{i:06}"))).collect();
        Ok(Self { ids, entries })
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.size()).map(|i| self.entries[i][i]).collect()
    }
}

/// Weights on the diagonal, 1 for every edge, 0 elsewhere.
pub fn linking_matrix(g: &PlumbingGraph) -> LinkingMatrix {
    let ids: Vec<VertexId> = g.ids().cloned().collect();
    let n = ids.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (i, (_, w)) in g.vertices().enumerate() {
        entries[i][i] = w;
    }
    for (u, v) in g.edges() {
        let i = ids.binary_search(u).expect("edge endpoint is a vertex");
        let j = ids.binary_search(v).expect("edge endpoint is a vertex");
        entries[i][j] = 1;
        entries[j][i] = 1;
    }
    LinkingMatrix { ids, entries }
}

/// One diagonal block of a congruence diagonalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// A 1×1 block `[d]`, `d != 0`.
    Scalar(Rational),
    /// A 2×2 block `[[0, b], [b, 0]]`, `b != 0`; one positive and one negative direction.
    Hyperbolic(Rational),
}

/// Congruence diagonalization `P A Pᵀ = D`.
///
/// Returns the nonsingular blocks of `D` and the dimension of its zero part.
/// Pivots are chosen among nonzero diagonal entries with the fewest nonzero
/// off-diagonal entries (leaves first on a tree, so no fill-in). When the
/// remaining diagonal is identically zero a hyperbolic 2×2 block is split off.
pub fn diagonalize(m: &LinkingMatrix) -> (Vec<Block>, usize) {
    let n = m.size();
    let mut a: Vec<Vec<Rational>> = m
        .rows()
        .iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();

    let support = |a: &Vec<Vec<Rational>>, active: &[usize], i: usize| -> Vec<usize> {
        active
            .iter()
            .copied()
            .filter(|&j| j != i && !a[i][j].is_zero())
            .collect()
    };

    while !active.is_empty() {
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| !a[i][i].is_zero())
            .min_by_key(|&i| (support(&a, &active, i).len(), i));

        if let Some(p) = pivot {
            let nbrs = support(&a, &active, p);
            let d = a[p][p].clone();
            let inv = d.recip().expect("pivot is nonzero");
            for &j in &nbrs {
                let f = &a[j][p] * &inv;
                for &l in &nbrs {
                    let delta = &f * &a[p][l];
                    a[j][l] = &a[j][l] - &delta;
                }
            }
            for &j in &nbrs {
                a[j][p] = Rational::zero();
                a[p][j] = Rational::zero();
            }
            active.retain(|&i| i != p);
            blocks.push(Block::Scalar(d));
            continue;
        }

        // Zero diagonal: find any nonzero off-diagonal pair.
        let pair = active.iter().copied().find_map(|i| {
            active
                .iter()
                .copied()
                .find(|&j| j != i && !a[i][j].is_zero())
                .map(|j| (i, j))
        });
        let Some((p, q)) = pair else {
            break;
        };
        let b = a[p][q].clone();
        let inv = b.recip().expect("off-diagonal pivot is nonzero");
        let mut nbrs: Vec<usize> = support(&a, &active, p)
            .into_iter()
            .chain(support(&a, &active, q))
            .filter(|&j| j != p && j != q)
            .collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        // Schur complement with B⁻¹ = [[0, 1/b], [1/b, 0]]:
        // S[j][l] = A[j][l] - (A[j][p] A[q][l] + A[j][q] A[p][l]) / b.
        for &j in &nbrs {
            for &l in &nbrs {
                let cross = &(&a[j][p] * &a[q][l]) + &(&a[j][q] * &a[p][l]);
                let delta = &cross * &inv;
                a[j][l] = &a[j][l] - &delta;
            }
        }
        for &j in &nbrs {
            for k in [p, q] {
                a[j][k] = Rational::zero();
                a[k][j] = Rational::zero();
            }
        }
        active.retain(|&i| i != p && i != q);
        blocks.push(Block::Hyperbolic(b));
    }
    let nullity = active.len();
    (blocks, nullity)
}

/// Exact determinant: the product of the diagonal blocks' determinants.
pub fn determinant(m: &LinkingMatrix) -> BigInt {
    let (blocks, nullity) = diagonalize(m);
    if nullity > 0 {
        return BigInt::zero();
    }
    let mut det = Rational::from_integer(1);
    for b in &blocks {
        det = match b {
            Block::Scalar(d) => &det * d,
            Block::Hyperbolic(b) => &det * &(-&(b * b)),
        };
    }
    debug_assert!(
        det.is_integer(),
        "determinant of an integer matrix is an integer"
    );
    det.numer().clone()
}

/// Positive minus negative inertia, computed by exact diagonalization.
pub fn signature(m: &LinkingMatrix) -> i64 {
    let (blocks, _) = diagonalize(m);
    blocks
        .iter()
        .map(|b| match b {
            Block::Scalar(d) if d.numer().is_positive() => 1,
            Block::Scalar(_) => -1,
            Block::Hyperbolic(_) => 0,
        })
        .sum()
}

/// Solves `A x = b` over the two-element field when `A` is invertible mod 2.
/// Returns `None` for a singular system.
pub(crate) fn solve_mod2(rows: &[Vec<bool>], rhs: &[bool]) -> Option<Vec<bool>> {
    let n = rows.len();
    let words = (n + 1).div_ceil(64);
    let set = |bits: &mut Vec<u64>, i: usize| bits[i / 64] |= 1 << (i % 64);
    let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    // Augmented rows; column n holds the right-hand side.
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut bits = vec![0u64; words];
            for (j, &x) in row.iter().enumerate() {
                if x {
                    set(&mut bits, j);
                }
            }
            if b {
                set(&mut bits, n);
            }
            bits
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| get(&m[r], col))?;
        m.swap(col, pivot);
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && get(row, col) {
                row.iter_mut().zip(&prow).for_each(|(x, y)| *x ^= y);
            }
        }
    }
    Some((0..n).map(|i| get(&m[i], n)).collect())
}

/// The characteristic sublink: the unique vertex set `S` with
/// `Σ_{u∈S} A[v,u] ≡ A[v,v] (mod 2)` for every vertex `v`.
///
/// Fails with [`Error::Singular`] when the form is degenerate mod 2, which is
/// exactly when the determinant is even.
pub fn wu_class(g: &PlumbingGraph) -> Result<BTreeSet<VertexId>> {
    let m = linking_matrix(g);
    let rows: Vec<Vec<bool>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect())
        .collect();
    let rhs: Vec<bool> = m.diagonal().iter().map(|x| x.rem_euclid(2) == 1).collect();
    let x = solve_mod2(&rows, &rhs)
        .ok_or_else(|| Error::Singular("linking form has even determinant".into()))?;
    Ok(m.ids()
        .iter()
        .zip(x)
        .filter(|(_, b)| *b)
        .map(|(id, _)| id.clone())
        .collect())
}

/// Self-intersection `wᵀAw` of the indicator vector of `set`.
pub fn self_intersection(g: &PlumbingGraph, set: &BTreeSet<VertexId>) -> i64 {
    let diag: i64 = set.iter().filter_map(|v| g.weight(v)).sum();
    let inner_edges = g
        .edges()
        .filter(|(u, v)| set.contains(*u) && set.contains(*v))
        .count() as i64;
    diag + 2 * inner_edges
}

/// Neumann–Siebenmann invariant `μ̄ = σ(A) − wᵀAw`, with `w` the Wu class.
///
/// Defined whenever the determinant is odd. For `|det| = 1` the value is a
/// multiple of 8; a violation there is reported as [`Error::Parity`]. For other
/// odd determinants `μ̄` need not be divisible by 8 (the lens space `[-3]` gives 2).
pub fn mu_bar(g: &PlumbingGraph) -> Result<i64> {
    let w = wu_class(g)?;
    let m = linking_matrix(g);
    let value = signature(&m) - self_intersection(g, &w);
    if determinant(&m).abs().is_one() && value.rem_euclid(8) != 0 {
        return Err(Error::Parity(format!(
            "μ̄ = {value} is not a multiple of 8 on a unimodular form"
        )));
    }
    Ok(value)
}

/// Rohlin invariant of a plumbed homology sphere: `μ̄/8 mod 2`.
pub fn rohlin_mu_bar(g: &PlumbingGraph) -> Result<u8> {
    let det = determinant(&linking_matrix(g));
    if !det.abs().is_one() {
        return Err(Error::Domain(format!(
            "|det| = {} is not 1; boundary is not a homology sphere",
            det.abs()
        )));
    }
    let mu = mu_bar(g)?;
    Ok((mu / 8).rem_euclid(2) as u8)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    /// Fraction-free Bareiss elimination; independent of `diagonalize`.
    pub(crate) fn bareiss(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        &a[n - 1][n - 1] * sign
    }

    /// Brute-force characteristic subset search over all 2ⁿ subsets.
    fn brute_force_wu(g: &PlumbingGraph) -> Vec<BTreeSet<VertexId>> {
        let ids: Vec<VertexId> = g.ids().cloned().collect();
        let m = linking_matrix(g);
        let n = ids.len();
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|v| {
                    let lk: i64 = (0..n)
                        .filter(|u| mask >> u & 1 == 1)
                        .map(|u| m.get(v, u))
                        .sum();
                    (lk - m.get(v, v)).rem_euclid(2) == 0
                })
            })
            .map(|mask| {
                (0..n)
                    .filter(|u| mask >> u & 1 == 1)
                    .map(|u| ids[u].clone())
                    .collect()
            })
            .collect()
    }

    fn id(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn minus_two_zero() -> PlumbingGraph {
        PlumbingGraph::from_parts([(id("a"), -2), (id("b"), 0)], [(id("a"), id("b"))]).unwrap()
    }

    #[test]
    fn small_matrices() {
        let g = minus_two_zero();
        let m = linking_matrix(&g);
        assert_eq!(m.rows(), &[vec![-2, 1], vec![1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
        assert_eq!(signature(&m), 0);

        let single = PlumbingGraph::from_parts([(id("x"), 7)], []).unwrap();
        assert_eq!(linking_matrix(&single).rows(), &[vec![7]]);

        let empty = LinkingMatrix::from_rows(vec![]).unwrap();
        assert_eq!(signature(&empty), 0);
        assert_eq!(determinant(&empty), BigInt::one());
    }

    #[test]
    fn d2_matrix_diagonal_in_arm_order() {
        let m = linking_matrix(&fixtures::d2());
        assert_eq!(m.diagonal(), vec![-1, -3, -2, -7, -2, -3, -2, -2, -2]);
        assert!(determinant(&m).abs().is_one());
    }

    #[test]
    fn e8_invariants() {
        let e8 = fixtures::e8();
        let m = linking_matrix(&e8);
        assert_eq!(determinant(&m), BigInt::one());
        assert_eq!(bareiss(m.rows()), BigInt::one());
        assert_eq!(signature(&m), -8);
        assert!(wu_class(&e8).unwrap().is_empty());
        assert_eq!(mu_bar(&e8).unwrap(), -8);
        assert_eq!(rohlin_mu_bar(&e8).unwrap(), 1);
    }

    #[test]
    fn hyperbolic_pivot() {
        let m =
            LinkingMatrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        let (blocks, nullity) = diagonalize(&m);
        assert_eq!(nullity, 1);
        assert!(matches!(blocks[0], Block::Hyperbolic(_)));
        assert_eq!(signature(&m), 0);
        assert_eq!(determinant(&m), BigInt::zero());

        let h = LinkingMatrix::from_rows(vec![vec![0, 3], vec![3, 0]]).unwrap();
        assert_eq!(determinant(&h), BigInt::from(-9));
    }

    #[test]
    fn wu_class_matches_brute_force_on_fixtures() {
        for g in [
            fixtures::d2(),
            fixtures::d3(),
            fixtures::d4(),
            fixtures::e8(),
            minus_two_zero(),
        ] {
            let all = brute_force_wu(&g);
            assert_eq!(all.len(), 1);
            assert_eq!(wu_class(&g).unwrap(), all[0]);
        }
        // (-2)-(0): both framings are even, so the empty set is characteristic.
        assert!(wu_class(&minus_two_zero()).unwrap().is_empty());
    }

    #[test]
    fn sigma_5_9_13_mu_is_one() {
        let g = fixtures::d2();
        assert_eq!(mu_bar(&g).unwrap().rem_euclid(16), 8);
        assert_eq!(rohlin_mu_bar(&g).unwrap(), 1);
        assert_eq!(rohlin_mu_bar(&fixtures::sigma_3_13_23()).unwrap(), 1);
    }

    #[test]
    fn error_paths() {
        let even = PlumbingGraph::from_parts([(id("a"), -2)], []).unwrap();
        assert!(matches!(wu_class(&even), Err(Error::Singular(_))));
        assert!(matches!(mu_bar(&even), Err(Error::Singular(_))));
        let lens = PlumbingGraph::from_parts([(id("a"), -3)], []).unwrap();
        assert_eq!(mu_bar(&lens).unwrap(), 2);
        assert!(matches!(rohlin_mu_bar(&lens), Err(Error::Domain(_))));
        assert!(LinkingMatrix::from_rows(vec![vec![0, 1], vec![2, 0]]).is_err());
    }

    pub(crate) fn random_forest(
        rng: &mut impl rand::Rng,
        n: usize,
        lo: i64,
        hi: i64,
    ) -> PlumbingGraph {
        let mut g = PlumbingGraph::new();
        for i in 0..n {
            g.add_vertex(VertexId::new(format!("v{i:02}")), rng.gen_range(lo..=hi))
                .unwrap();
        }
        for i in 1..n {
            // Attach to an earlier vertex or leave as a new root.
            if rng.gen_bool(0.85) {
                let j = rng.gen_range(0..i);
                g.add_edge(
                    &VertexId::new(format!("v{i:02}")),
                    &VertexId::new(format!("v{j:02}")),
                )
                .unwrap();
            }
        }
        g
    }

    fn relabel(g: &PlumbingGraph, perm: &[usize]) -> PlumbingGraph {
        let ids: Vec<VertexId> = g.ids().cloned().collect();
        let map = |v: &VertexId| {
            let i = ids.binary_search(v).unwrap();
            VertexId::new(format!("r{:02}", perm[i]))
        };
        PlumbingGraph::from_parts(
            g.vertices().map(|(v, w)| (map(v), w)),
            g.edges().map(|(u, v)| (map(u), map(v))).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn invariants_on_random_forests(seed in any::<u64>(), n in 1usize..=12) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = random_forest(&mut rng, n, -5, 3);
            let m = linking_matrix(&g);
            let det = determinant(&m);
            prop_assert_eq!(&det, &bareiss(m.rows()));

            let mut perm: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            let mh = linking_matrix(&h);
            prop_assert_eq!(determinant(&mh), det.clone());
            prop_assert_eq!(signature(&mh), signature(&m));

            let brute = brute_force_wu(&g);
            let odd = det.is_odd();
            if odd {
                prop_assert_eq!(brute.len(), 1);
                let w = wu_class(&g).unwrap();
                prop_assert_eq!(&w, &brute[0]);
                let mu = mu_bar(&g).unwrap();
                if det.abs().is_one() {
                    prop_assert_eq!(mu.rem_euclid(8), 0);
                }
            } else {
                prop_assert!(wu_class(&g).is_err());
            }
        }
    }

    use num_integer::Integer;
}
