//! Seifert invariants, star plumbings and the lattice-point signature of
//! Brieskorn homology spheres Σ(a1, a2, a3).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{bezout, neg_cont_frac, Rational};
use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};

/// Pairwise coprime multiplicities, each at least 2, stored ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrieskornTriple([i64; 3]);

impl BrieskornTriple {
    pub fn new(a1: i64, a2: i64, a3: i64) -> Result<Self> {
        let mut t = [a1, a2, a3];
        t.sort_unstable();
        if t[0] < 2 {
            return Err(Error::Domain(format!(
                "Brieskorn indices must be at least 2, got {a1}, {a2}, {a3}"
            )));
        }
        for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            if x.gcd(&y) != 1 {
                return Err(Error::Domain(format!(
                    "indices {x} and {y} are not coprime"
                )));
            }
        }
        Ok(Self(t))
    }

    pub fn indices(&self) -> [i64; 3] {
        self.0
    }

    pub fn product(&self) -> BigInt {
        self.0.iter().map(|&x| BigInt::from(x)).product()
    }
}

impl fmt::Display for BrieskornTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "Σ({a},{b},{c})")
    }
}

/// One exceptional fiber `(alpha, beta)`, `0 < beta < alpha`, coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arm {
    pub alpha: i64,
    pub beta: i64,
}

impl Arm {
    /// Arm weight `-alpha/beta`, the label of the arm in a rational star.
    pub fn weight(&self) -> Rational {
        Rational::new(-self.alpha, self.beta).expect("beta is positive")
    }
}

/// Unnormalized Seifert invariants `(b; (α₁,β₁), …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertData {
    b: i64,
    arms: Vec<Arm>,
}

impl SeifertData {
    pub fn new(b: i64, arms: Vec<Arm>) -> Result<Self> {
        for a in &arms {
            if a.alpha < 2 || a.beta <= 0 || a.beta >= a.alpha || a.alpha.gcd(&a.beta) != 1 {
                return Err(Error::Domain(format!(
                    "invalid arm ({}, {}): need 0 < beta < alpha, coprime",
                    a.alpha, a.beta
                )));
            }
        }
        Ok(Self { b, arms })
    }

    pub fn central_weight(&self) -> i64 {
        self.b
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    /// Euler number `e = b + Σ βᵢ/αᵢ`.
    pub fn euler_number(&self) -> Rational {
        self.arms
            .iter()
            .fold(Rational::from_integer(self.b), |acc, a| {
                &acc + &Rational::new(a.beta, a.alpha).expect("alpha is positive")
            })
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b = {}", self.b)?;
        for a in &self.arms {
            write!(f, "; ({}, {})", a.alpha, a.beta)?;
        }
        Ok(())
    }
}

/// Seifert invariants of Σ(a1,a2,a3), normalized so that `e = -1/(a1 a2 a3)`.
///
/// With `a = a1 a2 a3`, each `βᵢ` solves `(a/αᵢ) βᵢ ≡ -1 (mod αᵢ)` and
/// `b = (-1 - Σ βᵢ a/αᵢ)/a`.
pub fn brieskorn_seifert(t: &BrieskornTriple) -> Result<SeifertData> {
    let a = t.product();
    let mut arms = Vec::with_capacity(3);
    let mut weighted = BigInt::zero();
    for alpha in t.indices() {
        let big_alpha = BigInt::from(alpha);
        let cofactor = &a / &big_alpha;
        let (g, u, _) = bezout(&cofactor.mod_floor(&big_alpha), &big_alpha)?;
        if !g.is_one() {
            return Err(Error::Domain(format!(
                "{alpha} is not coprime to its cofactor"
            )));
        }
        // u·cofactor ≡ 1, so β = -u solves cofactor·β ≡ -1.
        let beta = (-u).mod_floor(&big_alpha);
        weighted += &beta * &cofactor;
        let beta = beta.to_i64().expect("beta < alpha fits in i64");
        arms.push(Arm { alpha, beta });
    }
    let numerator = -BigInt::one() - weighted;
    let (b, rem) = numerator.div_rem(&a);
    if !rem.is_zero() {
        return Err(Error::Domain(format!(
            "central weight for {t} is not integral"
        )));
    }
    let b = b
        .to_i64()
        .ok_or_else(|| Error::Domain("central weight overflows i64".into()))?;
    let data = SeifertData::new(b, arms)?;
    let expected = Rational::new(-1, a)?;
    assert_eq!(
        data.euler_number(),
        expected,
        "homology-sphere identity fails for {t}"
    );
    Ok(data)
}

/// Vertex id of the central node of a star built by [`star_plumbing`].
pub const CENTER_ID: &str = "s";

/// Id of the `j`-th vertex (1-based) of arm `i` (1-based).
pub fn arm_vertex_id(arm: usize, position: usize) -> VertexId {
    VertexId::new(format!("{CENTER_ID}{arm:02}_{position:03}"))
}

/// Star-shaped plumbing: a centre of weight `b`, and for each arm the chain
/// `neg_cont_frac(-α/β)` attached at its first term.
pub fn star_plumbing(s: &SeifertData) -> Result<PlumbingGraph> {
    let mut g = PlumbingGraph::new();
    let center = VertexId::new(CENTER_ID);
    g.add_vertex(center.clone(), s.central_weight())?;
    for (i, arm) in s.arms().iter().enumerate() {
        let chain = neg_cont_frac(&arm.weight())?;
        let mut prev = center.clone();
        for (j, term) in chain.terms().iter().enumerate() {
            let w = term
                .to_i64()
                .ok_or_else(|| Error::Domain(format!("chain weight {term} overflows i64")))?;
            let id = arm_vertex_id(i + 1, j + 1);
            g.add_vertex(id.clone(), w)?;
            g.add_edge(&prev, &id)?;
            prev = id;
        }
    }
    Ok(g)
}

/// All three indices odd: then multiplication by -1 in the circle action is
/// a free involution.
pub fn all_odd(t: &BrieskornTriple) -> bool {
    t.indices().iter().all(|x| x.is_odd())
}

/// Signature of the Milnor fiber of `x^a1 + y^a2 + z^a3`, by enumerating all
/// lattice points `(i,j,k)`, `1 <= i < a1` etc.
///
/// With `s = i/a1 + j/a2 + k/a3` reduced mod 2, points with `s ∈ (0,1)` count
/// positive and points with `s ∈ (1,2)` count negative.
pub fn brieskorn_signature(t: &BrieskornTriple) -> i64 {
    let [a1, a2, a3] = t.indices().map(|x| x as u128);
    let n = a1 * a2 * a3;
    let (c1, c2, c3) = (a2 * a3, a1 * a3, a1 * a2);
    let mut sigma = 0i64;
    for i in 1..a1 {
        for j in 1..a2 {
            let base = i * c1 + j * c2;
            for k in 1..a3 {
                let r = (base + k * c3) % (2 * n);
                if r < n {
                    sigma += 1;
                } else {
                    sigma -= 1;
                }
            }
        }
    }
    sigma
}

/// Same value as [`brieskorn_signature`], counting the innermost index in
/// closed form. `O(a1·a2)` instead of `O(a1·a2·a3)`.
pub fn brieskorn_signature_counted(t: &BrieskornTriple) -> i64 {
    let [a1, a2, a3] = t.indices().map(|x| x as u128);
    let mut sigma = 0i128;
    for i in 1..a1 {
        for j in 1..a2 {
            // floor(s) for s = x + k/a3 equals floor((u + k)/a3), u = floor(a3·x).
            let u = (i * a2 * a3 + j * a1 * a3) / (a1 * a2);
            let (q, r) = (u / a3, u % a3);
            let low = (a3 - 1 - r) as i128; // k with floor(s) = q
            let high = r as i128; // k with floor(s) = q + 1
            sigma += if q % 2 == 0 { low - high } else { high - low };
        }
    }
    sigma as i64
}

fn require_all_odd(t: &BrieskornTriple) -> Result<()> {
    if all_odd(t) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{t} has an even index; the Milnor fiber route needs all indices odd"
        )))
    }
}

fn rohlin_bit(t: &BrieskornTriple, sigma: i64) -> Result<u8> {
    if sigma.rem_euclid(8) != 0 {
        return Err(Error::Parity(format!(
            "signature {sigma} of {t} is not a multiple of 8"
        )));
    }
    Ok((sigma / 8).rem_euclid(2) as u8)
}

/// Rohlin invariant `σ/8 mod 2` from the lattice-point signature. All-odd triples only.
pub fn rohlin_from_signature(t: &BrieskornTriple) -> Result<u8> {
    require_all_odd(t)?;
    rohlin_bit(t, brieskorn_signature(t))
}

/// As [`rohlin_from_signature`], using [`brieskorn_signature_counted`].
pub fn rohlin_from_counted_signature(t: &BrieskornTriple) -> Result<u8> {
    require_all_odd(t)?;
    rohlin_bit(t, brieskorn_signature_counted(t))
}
