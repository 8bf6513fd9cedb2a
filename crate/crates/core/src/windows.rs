//! Grade-restriction windows on characters.
//!
//! A character `χ′` lies in the window when, for every stratum `i`, its
//! `λ_i`-weight `−⟨λ_i, χ′⟩` lies in `[w_i, w_i + η_i)`.

use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::gitcore::{Stratification, Stratum};
use crate::linalg;
use crate::polyhedra::combinations;
use crate::rational::{self, int, IntVector, Rational};
use crate::vgit::WallCrossingReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window specification has {found} entries, expected one per stratum ({expected})")]
    SpecLength { expected: usize, found: usize },
    #[error("character has length {found}, expected {expected}")]
    CharacterShape { expected: usize, found: usize },
    #[error("wall crossing is not balanced; windows cannot be matched")]
    Unbalanced,
}

/// One integer `w_i` per stratum, in stratification order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowSpec(pub Vec<i64>);

impl WindowSpec {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

/// `w ≤ −⟨λ, χ′⟩ < w + η`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowRule {
    pub lambda: IntVector,
    pub eta: i64,
    pub w: i64,
}

impl WindowRule {
    pub fn weight(&self, chi: &[i64]) -> i64 {
        -rational::dot_int(&self.lambda, chi)
    }

    pub fn admits(&self, chi: &[i64]) -> bool {
        let q = self.weight(chi);
        self.w <= q && q < self.w + self.eta
    }
}

pub fn window_rules(strata: &[Stratum], w: &WindowSpec) -> Result<Vec<WindowRule>, WindowError> {
    if w.0.len() != strata.len() {
        return Err(WindowError::SpecLength { expected: strata.len(), found: w.0.len() });
    }
    Ok(strata
        .iter()
        .zip(&w.0)
        .map(|(s, &w)| WindowRule { lambda: s.lambda.clone(), eta: s.eta, w })
        .collect())
}

pub fn window_contains_character(
    stratification: &Stratification,
    w: &WindowSpec,
    chi: &[i64],
) -> Result<bool, WindowError> {
    let rules = window_rules(&stratification.strata, w)?;
    if let Some(r) = rules.first() {
        if r.lambda.len() != chi.len() {
            return Err(WindowError::CharacterShape { expected: r.lambda.len(), found: chi.len() });
        }
    }
    Ok(rules.iter().all(|r| r.admits(chi)))
}

/// The characters of a window inside the box `[−R, R]^k`, with a
/// description of the full (possibly infinite) solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCharacterSet {
    pub rank: usize,
    pub rules: Vec<WindowRule>,
    pub box_radius: u32,
    /// Passing characters in lexicographic order.
    pub characters: Vec<IntVector>,
    /// Whether the full set of window characters is finite.
    pub finite: bool,
    /// When finite: the smallest box radius containing every window character.
    pub bounding_radius: Option<i64>,
    /// The listed characters are all window characters.
    pub complete: bool,
    /// Integer basis of the translations preserving the window (empty when finite).
    pub translation_lattice: Vec<IntVector>,
}

impl WindowCharacterSet {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }
}

pub fn enumerate_window_characters(
    stratification: &Stratification,
    w: &WindowSpec,
    rank: usize,
    box_radius: u32,
) -> Result<WindowCharacterSet, WindowError> {
    let rules = window_rules(&stratification.strata, w)?;
    for r in &rules {
        if r.lambda.len() != rank {
            return Err(WindowError::CharacterShape { expected: rank, found: r.lambda.len() });
        }
    }
    Ok(enumerate_rules(rank, rules, box_radius))
}

pub fn enumerate_rules(rank: usize, rules: Vec<WindowRule>, box_radius: u32) -> WindowCharacterSet {
    let r = i64::from(box_radius);
    let mut characters = Vec::new();
    let mut chi = vec![-r; rank];
    'outer: loop {
        if rules.iter().all(|rule| rule.admits(&chi)) {
            characters.push(chi.clone());
        }
        for pos in (0..rank).rev() {
            if chi[pos] < r {
                chi[pos] += 1;
                for later in chi.iter_mut().skip(pos + 1) {
                    *later = -r;
                }
                continue 'outer;
            }
        }
        break;
    }

    let empty = rules.iter().any(|rule| rule.eta <= 0);
    let lambdas: Vec<IntVector> = rules.iter().map(|rule| rule.lambda.clone()).collect();
    let spanning = linalg::rank(
        &lambdas.iter().map(|l| rational::to_rational_vec(l)).collect::<Vec<_>>(),
        rank,
    ) == rank;
    let finite = empty || spanning;
    let bounding_radius = if empty {
        Some(0)
    } else if spanning {
        Some(bounding_radius(rank, &rules))
    } else {
        None
    };
    let complete = bounding_radius.is_some_and(|b| b <= r);
    let translation_lattice = if finite { Vec::new() } else { integer_kernel(&lambdas, rank) };
    WindowCharacterSet {
        rank,
        rules,
        box_radius,
        characters,
        finite,
        bounding_radius,
        complete,
        translation_lattice,
    }
}

/// Largest absolute coordinate over the vertices of the bounded polytope
/// `{x : w_i ≤ −⟨λ_i, x⟩ ≤ w_i + η_i − 1}`, rounded up; 0 if it is empty.
fn bounding_radius(rank: usize, rules: &[WindowRule]) -> i64 {
    // Each bound as (row, level) with row·x ≥ level.
    let mut bounds: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for rule in rules {
        let neg: Vec<i64> = rule.lambda.iter().map(|x| -x).collect();
        bounds.push((rational::to_rational_vec(&neg), int(rule.w)));
        bounds.push((rational::to_rational_vec(&rule.lambda), int(-(rule.w + rule.eta - 1))));
    }
    let mut radius = Rational::from_integer(0.into());
    for subset in combinations(bounds.len(), rank) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| bounds[i].0.clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| bounds[i].1.clone()).collect();
        let Some(v) = linalg::solve_square(&rows, &rhs) else { continue };
        if bounds.iter().all(|(a, b)| &rational::dot(a, &v) >= b) {
            for x in &v {
                radius = radius.max(x.abs());
            }
        }
    }
    i64::try_from(radius.ceil().to_integer()).unwrap_or(i64::MAX)
}

/// Basis of the lattice `{x ∈ Z^k : ⟨row, x⟩ = 0 for every row}`, via integer
/// column reduction of the rows stacked over the identity.
pub(crate) fn integer_kernel(rows: &[IntVector], k: usize) -> Vec<IntVector> {
    // cols[c] = (column c of the row matrix, column c of the identity)
    let mut cols: Vec<(Vec<i128>, Vec<i128>)> = (0..k)
        .map(|c| {
            let top = rows.iter().map(|r| i128::from(r[c])).collect();
            let mut bottom = vec![0i128; k];
            bottom[c] = 1;
            (top, bottom)
        })
        .collect();
    let mut start = 0;
    for r in 0..rows.len() {
        // Euclid across the remaining columns until one nonzero entry is left in row r.
        loop {
            let nonzero: Vec<usize> = (start..k).filter(|&c| cols[c].0[r] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&c) = nonzero.first() {
                    cols.swap(start, c);
                    start += 1;
                }
                break;
            }
            let pivot = *nonzero
                .iter()
                .min_by_key(|&&c| cols[c].0[r].abs())
                .expect("nonempty");
            for &c in &nonzero {
                if c == pivot {
                    continue;
                }
                let q = cols[c].0[r] / cols[pivot].0[r];
                let (pt, pb) = cols[pivot].clone();
                for (x, y) in cols[c].0.iter_mut().zip(&pt) {
                    *x -= q * y;
                }
                for (x, y) in cols[c].1.iter_mut().zip(&pb) {
                    *x -= q * y;
                }
            }
        }
    }
    let mut basis: Vec<IntVector> = cols[start..]
        .iter()
        .map(|(_, b)| b.iter().map(|&x| i64::try_from(x).expect("kernel entries fit")).collect())
        .collect();
    basis.sort();
    basis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRelation {
    /// The two windows have the same characters.
    Equal,
    /// The minus-side window is contained in the plus-side window.
    EmbedMinusIntoPlus,
    /// The plus-side window is contained in the minus-side window.
    EmbedPlusIntoMinus,
    /// Different strata embed in different directions.
    Mixed,
}

impl WindowRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowRelation::Equal => "equal",
            WindowRelation::EmbedMinusIntoPlus => "embed_minus_into_plus",
            WindowRelation::EmbedPlusIntoMinus => "embed_plus_into_minus",
            WindowRelation::Mixed => "mixed",
        }
    }
}

impl fmt::Display for WindowRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMatch {
    /// One entry per minus-side wall stratum, in report order.
    pub w_minus: WindowSpec,
    pub relation: WindowRelation,
    pub per_stratum: Vec<WindowRelation>,
}

/// Chooses minus-side window integers so that, stratum by stratum, the
/// narrower window is contained in the wider one (equal when widths agree).
/// `w_plus` has one entry per plus-side wall stratum of the report.
pub fn match_windows_across_wall(
    report: &WallCrossingReport,
    w_plus: &WindowSpec,
) -> Result<Option<WindowMatch>, WindowError> {
    if report.one_sided {
        return Ok(None);
    }
    if !report.balanced {
        return Err(WindowError::Unbalanced);
    }
    if w_plus.0.len() != report.plus_strata.len() {
        return Err(WindowError::SpecLength { expected: report.plus_strata.len(), found: w_plus.0.len() });
    }
    // Minus strata are reported in their own order; pairs follow plus order.
    let mut w_minus = vec![0; report.minus_strata.len()];
    let mut per_stratum = Vec::new();
    for (pair, &wp) in report.pairs.iter().zip(&w_plus.0) {
        let idx = report
            .minus_strata
            .iter()
            .position(|s| s.lambda == pair.lambda_minus && s.fixed_coords == pair.fixed_coords)
            .expect("balanced pairs refer to reported strata");
        w_minus[idx] = -wp - pair.eta_minus + 1;
        per_stratum.push(match pair.eta_minus.cmp(&pair.eta_plus) {
            std::cmp::Ordering::Equal => WindowRelation::Equal,
            std::cmp::Ordering::Less => WindowRelation::EmbedMinusIntoPlus,
            std::cmp::Ordering::Greater => WindowRelation::EmbedPlusIntoMinus,
        });
    }
    let relation = if per_stratum.iter().all(|r| *r == WindowRelation::Equal) {
        WindowRelation::Equal
    } else if per_stratum.iter().all(|r| *r != WindowRelation::EmbedPlusIntoMinus) {
        WindowRelation::EmbedMinusIntoPlus
    } else if per_stratum.iter().all(|r| *r != WindowRelation::EmbedMinusIntoPlus) {
        WindowRelation::EmbedPlusIntoMinus
    } else {
        WindowRelation::Mixed
    };
    Ok(Some(WindowMatch { w_minus: WindowSpec(w_minus), relation, per_stratum }))
}
