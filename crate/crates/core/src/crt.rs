//! Residue encoding and exact two-moduli reconstruction.
//!
//! A polynomial `a` with `deg(a) < deg(M)` is represented by its residues
//! `a_i = a mod m_i`, with folding polynomials `k_i` such that
//! `a = k_i * m_i + a_i`. Subtracting the two forms and dividing by
//! `m = gcd(m1, m2)` gives `k2 * gamma2 - k1 * gamma1 = (a1 - a2) / m`, so
//! `k2 = ((a1 - a2) / m) * gamma2^{-1} mod gamma1` and `a = k2 * m2 + a2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::levels::ModuliPairAnalysis;
use crate::poly::Polynomial;

/// Residues of a polynomial modulo the (normalized) moduli of an analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePair<'a> {
    analysis: &'a ModuliPairAnalysis,
    a1: Polynomial,
    a2: Polynomial,
}

impl<'a> ResiduePair<'a> {
    /// Checks that both residues are reduced with respect to their moduli.
    pub fn new(analysis: &'a ModuliPairAnalysis, a1: Polynomial, a2: Polynomial) -> Result<Self> {
        check_reduced(analysis, &a1, &a2)?;
        Ok(Self { analysis, a1, a2 })
    }

    pub fn analysis(&self) -> &'a ModuliPairAnalysis {
        self.analysis
    }

    pub fn a1(&self) -> &Polynomial {
        &self.a1
    }

    pub fn a2(&self) -> &Polynomial {
        &self.a2
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.a1, self.a2)
    }
}

pub(crate) fn check_reduced(
    analysis: &ModuliPairAnalysis,
    a1: &Polynomial,
    a2: &Polynomial,
) -> Result<()> {
    for (r, m) in [(a1, analysis.m1()), (a2, analysis.m2())] {
        if r.field() != m.field() {
            return Err(Error::MixedFields {
                left: r.field().characteristic(),
                right: m.field().characteristic(),
            });
        }
        if r.degree() >= m.degree() {
            return Err(Error::ResidueNotReduced {
                degree: r.degree().finite().unwrap_or(0),
                modulus_degree: m.degree().finite().unwrap_or(0),
            });
        }
    }
    Ok(())
}

/// Folding polynomials: `a = k1 * m1 + a1 = k2 * m2 + a2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldingWitness {
    pub k1: Polynomial,
    pub k2: Polynomial,
}

/// Computes residues and folding polynomials of `a`.
pub fn encode<'a>(
    a: &Polynomial,
    analysis: &'a ModuliPairAnalysis,
) -> Result<(ResiduePair<'a>, FoldingWitness)> {
    if a.field() != analysis.field() {
        return Err(Error::MixedFields {
            left: a.field().characteristic(),
            right: analysis.field().characteristic(),
        });
    }
    let bound = analysis.lcm_degree();
    if let Some(d) = a.degree().finite() {
        if d >= bound {
            return Err(Error::DegreeOutOfRange { degree: d, bound });
        }
    }
    let (k1, a1) = a.div_rem(analysis.m1())?;
    let (k2, a2) = a.div_rem(analysis.m2())?;
    Ok((
        ResiduePair { analysis, a1, a2 },
        FoldingWitness { k1, k2 },
    ))
}

/// True iff `a1 = a2 (mod gcd(m1, m2))`.
pub fn check_consistency(r: &ResiduePair<'_>) -> bool {
    let diff = r.a1() - r.a2();
    diff.rem(r.analysis.gcd())
        .map(|rem| rem.is_zero())
        .unwrap_or(false)
}

/// `k2 = (diff / m) * gamma2^{-1} mod gamma1` where `diff = a1 - a2` must be
/// divisible by `m`.
pub(crate) fn folding_from_difference(
    analysis: &ModuliPairAnalysis,
    diff: &Polynomial,
) -> Result<Polynomial> {
    let reduced = diff.exact_div(analysis.gcd())?;
    (&reduced * analysis.gamma2_inv()).rem(analysis.gamma1())
}

/// The unique `a` with `deg(a) < deg(M)` having the given residues.
pub fn crt_pair(r: &ResiduePair<'_>) -> Result<Polynomial> {
    if !check_consistency(r) {
        return Err(Error::InconsistentResidues);
    }
    let k2 = folding_from_difference(r.analysis, &(r.a1() - r.a2()))?;
    Ok(&(&k2 * r.analysis.m2()) + r.a2())
}
