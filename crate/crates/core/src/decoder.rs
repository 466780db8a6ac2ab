//! Closed-form robust reconstruction from residues carrying small-degree
//! errors.
//!
//! Given erroneous residues `r1 = a1 + e1`, `r2 = a2 + e2` and a level `i`,
//! the decoder forms `q21 = r1 - r2` and strips the error part from it by a
//! remainder cascade modulo `m * sigma_1, ..., m * sigma_i` (after a first
//! reduction modulo `m1` when `deg(q21) >= deg(m1)`). What is left over is
//! exactly `e1 - e2`, so `q21 - tail = a1 - a2` and the folding polynomial
//! `k2` follows from the CRT relation. The estimate `k2 * m2 + r2` then
//! differs from `a` by `e2` only.
//!
//! The guarantee holds when `deg(a) < deg(M) - deg(sigma_i)` and both errors
//! have degree `<= tau < deg(m) + deg(sigma_i)`. Outside those hypotheses the
//! decoder either fails with [`crate::Error::InexactDivision`] or returns an
//! estimate that may be wrong; there is no detector for the latter.

use serde::Serialize;

use crate::crt::{check_reduced, folding_from_difference};
use crate::error::Result;
use crate::levels::ModuliPairAnalysis;
use crate::poly::Polynomial;

/// Received residues `(r1, r2)`, reduced modulo `(m1, m2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErroneousResiduePair<'a> {
    analysis: &'a ModuliPairAnalysis,
    r1: Polynomial,
    r2: Polynomial,
}

impl<'a> ErroneousResiduePair<'a> {
    pub fn new(analysis: &'a ModuliPairAnalysis, r1: Polynomial, r2: Polynomial) -> Result<Self> {
        check_reduced(analysis, &r1, &r2)?;
        Ok(Self { analysis, r1, r2 })
    }

    pub fn analysis(&self) -> &'a ModuliPairAnalysis {
        self.analysis
    }

    pub fn r1(&self) -> &Polynomial {
        &self.r1
    }

    pub fn r2(&self) -> &Polynomial {
        &self.r2
    }
}

/// Which relation between the clean residues the difference `q21` reveals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    /// `deg(m) + deg(sigma_i) <= deg(q21) < deg(m1)`: `a1 != a2`, `deg(a2) < deg(m1)`.
    #[serde(rename = "Case1_FoldedDifference")]
    Case1FoldedDifference,
    /// `deg(q21) >= deg(m1)`: `deg(a2) >= deg(m1)`.
    #[serde(rename = "Case2_LargeResidue")]
    Case2LargeResidue,
    /// `deg(q21) < deg(m) + deg(sigma_i)`: `a1 == a2`.
    #[serde(rename = "Case3_EqualResidues")]
    Case3EqualResidues,
}

impl Branch {
    pub const ALL: [Branch; 3] = [
        Branch::Case1FoldedDifference,
        Branch::Case2LargeResidue,
        Branch::Case3EqualResidues,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Branch::Case1FoldedDifference => "Case1_FoldedDifference",
            Branch::Case2LargeResidue => "Case2_LargeResidue",
            Branch::Case3EqualResidues => "Case3_EqualResidues",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Output of [`reconstruct`]. Always `a_hat = k2_hat * m2 + r2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReconstructionResult {
    pub a_hat: Polynomial,
    pub k2_hat: Polynomial,
    pub branch: Branch,
    pub q21: Polynomial,
    /// Final cascade remainder (`f_i` or `g_i`); zero in case 3.
    pub cascade_tail: Polynomial,
}

/// Reduces `v` successively modulo `m * sigma_1, ..., m * sigma_level`.
pub fn remainder_cascade(
    v: &Polynomial,
    analysis: &ModuliPairAnalysis,
    level: usize,
) -> Result<Polynomial> {
    Ok(remainder_cascade_steps(v, analysis, level)?
        .pop()
        .unwrap_or_else(|| v.clone()))
}

/// Every intermediate remainder of [`remainder_cascade`], in order.
pub fn remainder_cascade_steps(
    v: &Polynomial,
    analysis: &ModuliPairAnalysis,
    level: usize,
) -> Result<Vec<Polynomial>> {
    analysis.level(level)?;
    let mut steps = Vec::with_capacity(level);
    let mut cur = v.clone();
    for j in 1..=level {
        cur = cur.rem(analysis.cascade_modulus(j))?;
        steps.push(cur.clone());
    }
    Ok(steps)
}

/// Sorts `q21` into one of the three cases for the given level.
pub fn classify(q21: &Polynomial, analysis: &ModuliPairAnalysis, level: usize) -> Result<Branch> {
    let spec = analysis.level(level)?;
    let d = q21.degree();
    Ok(if d >= analysis.m1_degree() {
        Branch::Case2LargeResidue
    } else if d >= spec.error_bound_exclusive {
        Branch::Case1FoldedDifference
    } else {
        Branch::Case3EqualResidues
    })
}

/// Robust reconstruction at `level`.
pub fn reconstruct(r: &ErroneousResiduePair<'_>, level: usize) -> Result<ReconstructionResult> {
    let analysis = r.analysis;
    let q21 = r.r1() - r.r2();
    let branch = classify(&q21, analysis, level)?;
    let (k2_hat, cascade_tail) = match branch {
        Branch::Case3EqualResidues => (
            Polynomial::zero(analysis.field()),
            Polynomial::zero(analysis.field()),
        ),
        Branch::Case1FoldedDifference | Branch::Case2LargeResidue => {
            let start = if branch == Branch::Case2LargeResidue {
                q21.rem(analysis.m1())?
            } else {
                q21.clone()
            };
            let tail = remainder_cascade(&start, analysis, level)?;
            let k2 = folding_from_difference(analysis, &(&q21 - &tail))?;
            (k2, tail)
        }
    };
    let a_hat = &(&k2_hat * analysis.m2()) + r.r2();
    Ok(ReconstructionResult {
        a_hat,
        k2_hat,
        branch,
        q21,
        cascade_tail,
    })
}

/// Reconstruction at the top level `K+1`: full dynamic range `deg(M)` with
/// error bound `deg(m)`.
pub fn prop1_reconstruct(r: &ErroneousResiduePair<'_>) -> Result<ReconstructionResult> {
    reconstruct(r, r.analysis.max_level())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::crt::encode;
    use crate::field::Field;
    use crate::levels::analyze_pair;

    fn p(text: &str) -> Polynomial {
        Polynomial::parse(text, Field::binary()).unwrap()
    }

    fn example() -> ModuliPairAnalysis {
        analyze_pair(
            &(&p("x^2+1") * &p("x^6+x^3+1")),
            &(&p("x^2+1") * &p("x^9+x^7+x+1")),
        )
        .unwrap()
    }

    #[test]
    fn cascade_example() {
        let an = example();
        let steps = remainder_cascade_steps(&p("x^7+x^5+x^4+1"), &an, 3).unwrap();
        assert_eq!(steps, vec![p("x^4+1"), p("x^4+1"), p("x^2+1")]);
        assert_eq!(remainder_cascade(&p("x^7+x^5+x^4+1"), &an, 3).unwrap(), p("x^2+1"));
    }

    #[test]
    fn cascade_trivial_inputs() {
        let an = example();
        for level in 1..=4 {
            assert!(remainder_cascade(&p("0"), &an, level).unwrap().is_zero());
        }
        // deg 1 < deg(m * sigma_4) = 2
        assert_eq!(remainder_cascade(&p("x+1"), &an, 4).unwrap(), p("x+1"));
        assert_eq!(
            remainder_cascade(&p("x"), &an, 5),
            Err(Error::LevelOutOfRange { level: 5, max: 4 })
        );
        assert!(remainder_cascade(&p("x"), &an, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let an = example();
        assert_eq!(
            classify(&p("x^7+x^5+x^4+1"), &an, 3).unwrap(),
            Branch::Case1FoldedDifference
        );
        assert_eq!(classify(&p("0"), &an, 1).unwrap(), Branch::Case3EqualResidues);
        // a with deg(a2) >= deg(m1) = 8
        let a = &(&p("x^3") * an.m2()) + &p("x^9+x");
        let (r, _) = encode(&a, &an).unwrap();
        assert!(r.a2().degree() >= 8usize);
        let q = r.a1() - r.a2();
        assert!(q.degree() >= 8usize);
        for level in 1..=4 {
            assert_eq!(classify(&q, &an, level).unwrap(), Branch::Case2LargeResidue);
        }
    }

    #[test]
    fn reconstruct_example_level3() {
        let an = example();
        let r = ErroneousResiduePair::new(&an, p("x^7"), p("x^5+x^4+1")).unwrap();
        let out = reconstruct(&r, 3).unwrap();
        assert_eq!(out.branch, Branch::Case1FoldedDifference);
        assert_eq!(out.q21, p("x^7+x^5+x^4+1"));
        assert_eq!(out.cascade_tail, p("x^2+1"));
        assert_eq!(out.k2_hat, p("x^4"));
        assert_eq!(out.a_hat, p("x^15+x^11+x^7+x^6+1"));
        let a = p("x^15+x^11+x^7+x^6+x+1");
        assert_eq!((&out.a_hat - &a).degree(), 1usize);
    }

    #[test]
    fn equal_residues_take_case3() {
        let an = example();
        let a = p("x^6+x^2+1");
        let (r, _) = encode(&a, &an).unwrap();
        let (a1, a2) = r.into_parts();
        let r = ErroneousResiduePair::new(&an, a1, a2.clone()).unwrap();
        let out = reconstruct(&r, 2).unwrap();
        assert_eq!(out.branch, Branch::Case3EqualResidues);
        assert!(out.k2_hat.is_zero() && out.cascade_tail.is_zero());
        assert_eq!(out.a_hat, a2);
    }

    #[test]
    fn zero_error_top_level_is_exact() {
        let an = example();
        for a in ["x^16+x^3", "x^15+x^11+x^7+x^6+x+1", "x^12", "1", "0"] {
            let a = p(a);
            let (r, _) = encode(&a, &an).unwrap();
            let (a1, a2) = r.into_parts();
            let r = ErroneousResiduePair::new(&an, a1, a2).unwrap();
            assert_eq!(prop1_reconstruct(&r).unwrap().a_hat, a);
        }
    }

    #[test]
    fn arbitrary_residues_always_divide_exactly() {
        // every cascade modulus is a multiple of m, so q21 - tail always is too;
        // out-of-bound inputs give a (possibly wrong) estimate, never an error
        let an = example();
        let f2 = Field::binary();
        for bits in 0u64..256 {
            let r1 = Polynomial::new(f2, (0..8).map(|i| (bits >> i) & 1).collect());
            let r2 = Polynomial::new(f2, (0..8).map(|i| (bits.wrapping_mul(37) >> i) & 1).collect());
            let pair = ErroneousResiduePair::new(&an, r1, r2).unwrap();
            for level in 1..=an.max_level() {
                let out = reconstruct(&pair, level).unwrap();
                assert_eq!(out.a_hat, &(&out.k2_hat * an.m2()) + pair.r2());
                if out.branch != Branch::Case3EqualResidues {
                    assert!((&out.q21 - &out.cascade_tail).rem(an.gcd()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn exhaustive_micro_oracle() {
        // m = x^2, gamma1 = x+1, gamma2 = x^2+x+1: K = 0, level 1 has tau < 2, deg(a) < 5
        let an = analyze_pair(&(&p("x^2") * &p("x+1")), &(&p("x^2") * &p("x^2+x+1"))).unwrap();
        assert_eq!(an.k(), 0);
        assert_eq!(an.levels()[0].error_bound_exclusive, 2);
        assert_eq!(an.levels()[0].dynamic_range_exclusive, 5);
        let f2 = Field::binary();
        let small = |bits: u64, len: usize| Polynomial::new(f2, (0..len).map(|i| (bits >> i) & 1).collect());
        for abits in 0u64..32 {
            let a = small(abits, 5);
            let (r, w) = encode(&a, &an).unwrap();
            for e1bits in 0u64..4 {
                for e2bits in 0u64..4 {
                    let (e1, e2) = (small(e1bits, 2), small(e2bits, 2));
                    let r = ErroneousResiduePair::new(&an, r.a1() + &e1, r.a2() + &e2).unwrap();
                    let out = reconstruct(&r, 1).unwrap();
                    assert_eq!(out.k2_hat, w.k2, "a={a} e1={e1} e2={e2}");
                    assert_eq!(&out.a_hat - &a, e2);
                }
            }
        }
    }
}
