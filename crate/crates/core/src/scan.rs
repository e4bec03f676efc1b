//! Search over the surgery family `K_{p,q}(r,s)` with coefficient
//! `r·s·(p+q)² + p·q` for ±1 surgeries, i.e. integral homology spheres.
//!
//! Every hit is mapped to a candidate Brieskorn triple `(|r·s|, |p|, |q|)`.
//! That mapping is a working hypothesis (see [`TRIPLE_HYPOTHESIS`]), fitted to
//! the one published data point `(p,q,r,s) = (-13,23,3,1) ↦ Σ(3,13,23)`.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seifert::{all_odd, rohlin_from_counted_signature, BrieskornTriple};

/// Label attached to every report that uses the triple extraction rule.
pub const TRIPLE_HYPOTHESIS: &str = "Sigma(|r*s|,|p|,|q|)";

/// `r·s·(p+q)² + p·q`, exactly.
pub fn mm97_coefficient(p: i64, q: i64, r: i64, s: i64) -> BigInt {
    let sum = BigInt::from(p) + q;
    BigInt::from(r) * s * &sum * &sum + BigInt::from(p) * q
}

/// The Brieskorn triple `(|r·s|, |p|, |q|)` assigned to a ±1 surgery.
///
/// Pairwise coprimality is forced: any common divisor of two indices divides
/// the coefficient. Fails with [`Error::Hypothesis`] when `|r·s| < 2`.
pub fn candidate_triple(p: i64, q: i64, r: i64, s: i64) -> Result<BrieskornTriple> {
    let coefficient = mm97_coefficient(p, q, r, s);
    if !coefficient.abs().is_one() {
        return Err(Error::Domain(format!(
            "coefficient {coefficient} is not ±1"
        )));
    }
    if p.abs() < 2 || q.abs() < 2 || p.gcd(&q) != 1 {
        return Err(Error::Domain(format!(
            "need |p|, |q| >= 2 and gcd(p, q) = 1, got p = {p}, q = {q}"
        )));
    }
    let rs = r
        .checked_mul(s)
        .and_then(i64::checked_abs)
        .ok_or_else(|| Error::Domain(format!("r*s overflows for r = {r}, s = {s}")))?;
    if rs < 2 {
        return Err(Error::Hypothesis(format!(
            "|r*s| = {rs} gives fewer than three exceptional fibers"
        )));
    }
    let triple = BrieskornTriple::new(rs, p.abs(), q.abs());
    assert!(
        triple.is_ok(),
        "coefficient ±1 forces pairwise coprime indices, violated at ({p},{q},{r},{s})"
    );
    triple
}

/// Grid of the search. Ranges may be empty; zero is skipped inside them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanParams {
    pub p_bound: i64,
    pub q_bound: i64,
    pub r_range: RangeInclusive<i64>,
    pub s_range: RangeInclusive<i64>,
}

impl ScanParams {
    pub fn new(
        p_bound: i64,
        q_bound: i64,
        r_range: RangeInclusive<i64>,
        s_range: RangeInclusive<i64>,
    ) -> Result<Self> {
        if p_bound < 1 || q_bound < 1 {
            return Err(Error::Domain("p and q bounds must be positive".into()));
        }
        // Keeps (p+q)² and p·q inside i128 with room to spare.
        let limit = 1i64 << 40;
        let ends = [
            *r_range.start(),
            *r_range.end(),
            *s_range.start(),
            *s_range.end(),
        ];
        if p_bound > limit || q_bound > limit || ends.iter().any(|x| x.abs() > limit) {
            return Err(Error::Domain(format!(
                "scan bounds must not exceed {limit} in magnitude"
            )));
        }
        Ok(Self {
            p_bound,
            q_bound,
            r_range,
            s_range,
        })
    }

    /// |p|, |q| <= 100 and r, s in [-20, 20] \ {0}.
    pub fn desk_default() -> Self {
        Self::new(100, 100, -20..=20, -20..=20).expect("valid defaults")
    }
}

/// One ±1 surgery found by the scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
    /// Present iff `|r·s| >= 2`.
    pub triple: Option<BrieskornTriple>,
    pub all_odd: bool,
    /// Rohlin invariant, computed for all-odd triples only.
    pub mu: Option<u8>,
}

#[derive(Serialize)]
struct RecordLine<'a> {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    coefficient: String,
    triple: Option<[i64; 3]>,
    all_odd: bool,
    mu: Option<u8>,
    hypothesis: &'a str,
}

impl ScanRecord {
    fn build(p: i64, q: i64, r: i64, s: i64) -> Self {
        let triple = candidate_triple(p, q, r, s).ok();
        let all_odd = triple.as_ref().is_some_and(all_odd);
        let mu = match &triple {
            Some(t) if all_odd => Some(
                rohlin_from_counted_signature(t)
                    .expect("all-odd Brieskorn signature is divisible by 8"),
            ),
            _ => None,
        };
        Self {
            p,
            q,
            r,
            s,
            triple,
            all_odd,
            mu,
        }
    }

    pub fn coefficient(&self) -> BigInt {
        mm97_coefficient(self.p, self.q, self.r, self.s)
    }

    /// All checkable hypotheses hold: ±1 coefficient, odd indices, μ = 1.
    pub fn is_lemma_candidate(&self) -> bool {
        self.triple.is_some()
            && self.all_odd
            && self.mu == Some(1)
            && self.coefficient().abs().is_one()
    }

    fn sort_key(&self) -> (i64, i64, i64, i64, i64, i64) {
        (self.p.abs(), self.q.abs(), self.r, self.s, self.p, self.q)
    }

    /// Single-line JSON with a fixed field order.
    pub fn to_record_line(&self) -> String {
        let line = RecordLine {
            p: self.p,
            q: self.q,
            r: self.r,
            s: self.s,
            coefficient: self.coefficient().to_string(),
            triple: self.triple.map(|t| t.indices()),
            all_odd: self.all_odd,
            mu: self.mu,
            hypothesis: TRIPLE_HYPOTHESIS,
        };
        serde_json::to_string(&line).expect("record serializes")
    }
}

fn nonzero(range: &RangeInclusive<i64>) -> impl Iterator<Item = i64> + '_ {
    range.clone().filter(|&x| x != 0)
}

fn signed_range(bound: i64) -> impl Iterator<Item = i64> {
    (-bound..=bound).filter(|x| x.abs() >= 2)
}

/// All `(p, q, r, s)` in the grid with `gcd(p,q) = 1`, `|p|,|q| >= 2` and a
/// ±1 coefficient, sorted by `(|p|, |q|, r, s)` (then `p`, `q`).
///
/// For each `(p, q)` the admissible products are `r·s = (±1 - p·q)/(p+q)²`,
/// so only divisors need checking. Parallel over `p`; the sorted output does
/// not depend on the partition.
pub fn scan_range(params: &ScanParams) -> Vec<ScanRecord> {
    let ps: Vec<i64> = signed_range(params.p_bound).collect();
    let mut records: Vec<ScanRecord> = ps
        .par_iter()
        .flat_map_iter(|&p| {
            let mut found = Vec::new();
            for q in signed_range(params.q_bound) {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let sum = i128::from(p) + i128::from(q);
                let square = sum * sum;
                let pq = i128::from(p) * i128::from(q);
                for target in [-1i128, 1] {
                    let (rs, rem) = (target - pq).div_rem(&square);
                    if rem != 0 || rs == 0 {
                        continue;
                    }
                    for r in nonzero(&params.r_range) {
                        let (s, rem) = rs.div_rem(&i128::from(r));
                        let Some(s) = s.to_i64() else { continue };
                        if rem == 0 && s != 0 && params.s_range.contains(&s) {
                            found.push(ScanRecord::build(p, q, r, s));
                        }
                    }
                }
            }
            found
        })
        .collect();
    records.sort_by_key(ScanRecord::sort_key);
    records
}

/// Aggregate view of a scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    pub records: usize,
    pub with_triple: usize,
    pub all_odd: usize,
    pub lemma_hits: usize,
    /// Distinct triples among the lemma hits.
    pub lemma_triples: BTreeSet<BrieskornTriple>,
}

pub fn summarize(records: &[ScanRecord]) -> ScanSummary {
    let lemma: Vec<&ScanRecord> = records.iter().filter(|r| r.is_lemma_candidate()).collect();
    ScanSummary {
        records: records.len(),
        with_triple: records.iter().filter(|r| r.triple.is_some()).count(),
        all_odd: records.iter().filter(|r| r.all_odd).count(),
        lemma_hits: lemma.len(),
        lemma_triples: lemma.iter().filter_map(|r| r.triple).collect(),
    }
}
