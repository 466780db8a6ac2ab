//! Structure of a non-coprime moduli pair and the level trade-off table.
//!
//! For moduli `m1 = m * gamma1` and `m2 = m * gamma2` with `m = gcd(m1, m2)`,
//! the remainder chain `sigma_{-1} = gamma2`, `sigma_0 = gamma1`,
//! `sigma_i = sigma_{i-2} mod sigma_{i-1}` runs until it reaches a nonzero
//! constant `sigma_{K+1}`. Each `i` in `1..=K+1` is a level: residue errors of
//! degree below `deg(m) + deg(sigma_i)` are tolerated for polynomials of
//! degree below `deg(M) - deg(sigma_i)`, where `M = lcm(m1, m2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;

/// One row of the trade-off table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSpec {
    /// Index into the sigma chain, `1..=K+1`.
    pub i: usize,
    pub sigma_deg: usize,
    /// Residue error degrees must be strictly below this.
    pub error_bound_exclusive: usize,
    /// Reconstructed polynomial degrees must be strictly below this.
    pub dynamic_range_exclusive: usize,
}

impl LevelSpec {
    /// Row label counted from the top of the table: level `K+1` is `I`.
    pub fn roman_label(&self, k: usize) -> String {
        roman(k + 2 - self.i)
    }
}

fn roman(mut n: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for &(v, s) in &TABLE {
        while n >= v {
            out.push_str(s);
            n -= v;
        }
    }
    out
}

/// Everything derived from a moduli pair, normalized so `deg(m1) <= deg(m2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliPairAnalysis {
    m1: Polynomial,
    m2: Polynomial,
    swapped: bool,
    gcd: Polynomial,
    gamma1: Polynomial,
    gamma2: Polynomial,
    lcm: Polynomial,
    gamma2_inv: Polynomial,
    /// `sigma_1 ..= sigma_{K+1}`; `sigma_{-1}` and `sigma_0` are the gammas.
    sigma: Vec<Polynomial>,
    /// `m * sigma_i` for each entry of `sigma`, the cascade moduli.
    cascade_moduli: Vec<Polynomial>,
    levels: Vec<LevelSpec>,
}

impl ModuliPairAnalysis {
    /// Analyzes the pair, swapping it first if `deg(m1) > deg(m2)`.
    ///
    /// Fails on a zero modulus, on coprime moduli, and when the
    /// lower-degree cofactor is constant (one modulus divides the other up
    /// to a scalar), since then no level exists.
    pub fn new(m1: &Polynomial, m2: &Polynomial) -> Result<Self> {
        if m1.field() != m2.field() {
            return Err(Error::MixedFields {
                left: m1.field().characteristic(),
                right: m2.field().characteristic(),
            });
        }
        if m1.is_zero() || m2.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let swapped = m1.degree() > m2.degree();
        let (m1, m2) = if swapped { (m2, m1) } else { (m1, m2) };

        let gcd = m1.gcd(m2)?;
        if gcd.is_constant() {
            return Err(Error::CoprimeModuli);
        }
        let gamma1 = m1.exact_div(&gcd)?;
        let gamma2 = m2.exact_div(&gcd)?;
        if gamma1.is_constant() {
            return Err(Error::DegenerateModuli);
        }
        let lcm = m1.lcm(m2)?;
        let gamma2_inv = gamma2.inv_mod(&gamma1)?;

        let mut sigma = Vec::new();
        let (mut prev, mut cur) = (gamma2.clone(), gamma1.clone());
        while !cur.is_constant() {
            let next = prev.rem(&cur)?;
            sigma.push(next.clone());
            prev = cur;
            cur = next;
        }
        // gcd(gamma1, gamma2) = 1 keeps the last remainder a nonzero constant
        debug_assert!(!cur.is_zero());

        let cascade_moduli: Vec<Polynomial> = sigma.iter().map(|s| &gcd * s).collect();
        let m_deg = degree_of(&gcd);
        let big_deg = degree_of(&lcm);
        let levels = sigma
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                let sd = degree_of(s);
                LevelSpec {
                    i: idx + 1,
                    sigma_deg: sd,
                    error_bound_exclusive: m_deg + sd,
                    dynamic_range_exclusive: big_deg - sd,
                }
            })
            .collect();

        Ok(Self {
            m1: m1.clone(),
            m2: m2.clone(),
            swapped,
            gcd,
            gamma1,
            gamma2,
            lcm,
            gamma2_inv,
            sigma,
            cascade_moduli,
            levels,
        })
    }

    pub fn field(&self) -> Field {
        self.m1.field()
    }

    /// The lower-degree modulus.
    pub fn m1(&self) -> &Polynomial {
        &self.m1
    }

    pub fn m2(&self) -> &Polynomial {
        &self.m2
    }

    /// Whether the inputs were given in the opposite order.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// `m = gcd(m1, m2)`, monic.
    pub fn gcd(&self) -> &Polynomial {
        &self.gcd
    }

    pub fn gamma1(&self) -> &Polynomial {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &Polynomial {
        &self.gamma2
    }

    /// `M = lcm(m1, m2)`, monic.
    pub fn lcm(&self) -> &Polynomial {
        &self.lcm
    }

    /// Inverse of `gamma2` modulo `gamma1`.
    pub fn gamma2_inv(&self) -> &Polynomial {
        &self.gamma2_inv
    }

    pub fn gcd_degree(&self) -> usize {
        degree_of(&self.gcd)
    }

    pub fn lcm_degree(&self) -> usize {
        degree_of(&self.lcm)
    }

    pub fn m1_degree(&self) -> usize {
        degree_of(&self.m1)
    }

    /// Index `K`: the chain ends at `sigma_{K+1}`, a nonzero constant.
    pub fn k(&self) -> usize {
        self.sigma.len() - 1
    }

    /// Highest level, `K + 1`.
    pub fn max_level(&self) -> usize {
        self.sigma.len()
    }

    /// `sigma_i` for `i` in `-1..=K+1`.
    pub fn sigma(&self, i: isize) -> Option<&Polynomial> {
        match i {
            -1 => Some(&self.gamma2),
            0 => Some(&self.gamma1),
            i if i > 0 => self.sigma.get(i as usize - 1),
            _ => None,
        }
    }

    /// The full chain `sigma_{-1}, sigma_0, ..., sigma_{K+1}`.
    pub fn sigma_chain(&self) -> Vec<&Polynomial> {
        [&self.gamma2, &self.gamma1]
            .into_iter()
            .chain(self.sigma.iter())
            .collect()
    }

    /// `m * sigma_i` for `i` in `1..=K+1`.
    pub(crate) fn cascade_modulus(&self, i: usize) -> &Polynomial {
        &self.cascade_moduli[i - 1]
    }

    /// Levels `1..=K+1`, ordered by increasing dynamic range.
    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> Result<&LevelSpec> {
        if i == 0 || i > self.levels.len() {
            return Err(Error::LevelOutOfRange {
                level: i,
                max: self.levels.len(),
            });
        }
        Ok(&self.levels[i - 1])
    }

    /// JSON-ready summary.
    pub fn summary(&self) -> AnalysisSummary {
        AnalysisSummary {
            p: self.field().characteristic(),
            m1: self.m1.clone(),
            m2: self.m2.clone(),
            swapped: self.swapped,
            m: self.gcd.clone(),
            gamma1: self.gamma1.clone(),
            gamma2: self.gamma2.clone(),
            gamma_inv21: self.gamma2_inv.clone(),
            deg_m: self.lcm_degree(),
            k: self.k(),
            sigma: self.sigma.clone(),
            levels: self.levels.clone(),
        }
    }

    /// Plain-text table with one row per level, level `K+1` (label `I`) last.
    pub fn render_table(&self) -> String {
        let headers = ["level", "i", "deg sigma_i", "residue error bound", "dynamic range"];
        let rows: Vec<[String; 5]> = self
            .levels
            .iter()
            .map(|l| {
                [
                    l.roman_label(self.k()),
                    l.i.to_string(),
                    l.sigma_deg.to_string(),
                    format!("tau < {}", l.error_bound_exclusive),
                    format!("deg(a) < {}", l.dynamic_range_exclusive),
                ]
            })
            .collect();
        let mut widths = headers.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[&str]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&headers);
        out.push('\n');
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            out.push_str(&line(&cells));
            out.push('\n');
        }
        out
    }
}

/// Serialized view of a [`ModuliPairAnalysis`].
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisSummary {
    pub p: u64,
    pub m1: Polynomial,
    pub m2: Polynomial,
    pub swapped: bool,
    pub m: Polynomial,
    pub gamma1: Polynomial,
    pub gamma2: Polynomial,
    pub gamma_inv21: Polynomial,
    #[serde(rename = "degM")]
    pub deg_m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// `sigma_1 ..= sigma_{K+1}`.
    pub sigma: Vec<Polynomial>,
    pub levels: Vec<LevelSpec>,
}

fn degree_of(p: &Polynomial) -> usize {
    p.degree().finite().expect("nonzero polynomial")
}

/// `analyze_pair`: see [`ModuliPairAnalysis::new`].
pub fn analyze_pair(m1: &Polynomial, m2: &Polynomial) -> Result<ModuliPairAnalysis> {
    ModuliPairAnalysis::new(m1, m2)
}

/// The level table of an analysis.
pub fn level_table(analysis: &ModuliPairAnalysis) -> Vec<LevelSpec> {
    analysis.levels().to_vec()
}

/// Exclusive residue error bound `max_i min_{j != i} deg(gcd(m_i, m_j))` for
/// an arbitrary set of at least two moduli.
pub fn proposition1_bound(moduli: &[Polynomial]) -> Result<usize> {
    if moduli.len() < 2 {
        return Err(Error::TooFewModuli(moduli.len()));
    }
    if moduli.iter().any(Polynomial::is_zero) {
        return Err(Error::ZeroModulus);
    }
    let n = moduli.len();
    let mut gcd_deg = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = degree_of(&moduli[i].gcd(&moduli[j])?);
            gcd_deg[i][j] = d;
            gcd_deg[j][i] = d;
        }
    }
    let bound = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| gcd_deg[i][j])
                .min()
                .expect("at least two moduli")
        })
        .max()
        .expect("at least two moduli");
    Ok(bound)
}
