//! The Gerstenhaber bracket of invariant reduced cocycles,
//! `[X, Y] = Σ_{g,h} p_{gh}{X_g, Y_h} gh`, with per-summand diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cochain::{differential, is_invariant, is_reduced, Cochain};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::polyvector::{schouten, Polyvector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vanishing {
    /// The Schouten bracket of the two components is already zero.
    SchoutenZero,
    /// `(V^g)^⊥ ∩ (V^h)^⊥ ≠ 0` and the projection removed the term.
    PerpIntersection,
    /// The projection `p_{gh}` removed a nonzero Schouten term.
    ProjectionKill,
}

impl fmt::Display for Vanishing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Vanishing::SchoutenZero => "schouten-zero",
            Vanishing::PerpIntersection => "perp-intersection",
            Vanishing::ProjectionKill => "projection-kill",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct BracketReport {
    pub result: Cochain,
    /// `(g, h) ↦ p_{gh}{X_g, Y_h}`, nonzero terms only.
    pub terms: BTreeMap<(usize, usize), Polyvector>,
    pub vanishing: Vec<(usize, usize, Vanishing)>,
}

/// Checks the hypotheses of the bracket formula on one input.
pub fn check_input(group: &Group, c: &Cochain, label: &str) -> Result<()> {
    if !c.is_well_formed() {
        return Err(Error::usage(format!("{label}: components must all have exterior degree {}", c.degree)));
    }
    if !differential(group, c).is_zero() {
        return Err(Error::usage(format!("{label}: not a cocycle")));
    }
    if !is_reduced(group, c) {
        return Err(Error::usage(format!("{label}: not in reduced form (try --project)")));
    }
    if !is_invariant(group, c) {
        return Err(Error::usage(format!("{label}: not G-invariant (try --reynolds)")));
    }
    Ok(())
}

/// Summands `p_{gh}{X_g, Y_h}` without any hypothesis checks.
pub fn bracket_unchecked(group: &Group, x: &Cochain, y: &Cochain) -> BracketReport {
    let n = group.dim;
    let pairs: Vec<(usize, &Polyvector, usize, &Polyvector)> = x
        .components()
        .iter()
        .flat_map(|(&g, xg)| y.components().iter().map(move |(&h, yh)| (g, xg, h, yh)))
        .collect();
    let outcomes: Vec<(usize, usize, std::result::Result<Polyvector, Vanishing>)> = pairs
        .par_iter()
        .map(|&(g, xg, h, yh)| {
            let s = schouten(xg, yh, n);
            if s.is_zero() {
                return (g, h, Err(Vanishing::SchoutenZero));
            }
            let t = group.geometry(group.mul(g, h)).project(&s);
            if !t.is_zero() {
                (g, h, Ok(t))
            } else if !group.moved_intersection(g, h).is_empty() {
                (g, h, Err(Vanishing::PerpIntersection))
            } else {
                (g, h, Err(Vanishing::ProjectionKill))
            }
        })
        .collect();
    let mut result = Cochain::zero((x.degree + y.degree).saturating_sub(1));
    let mut terms = BTreeMap::new();
    let mut vanishing = Vec::new();
    for (g, h, o) in outcomes {
        match o {
            Ok(t) => {
                result.add_component(group.mul(g, h), t.clone());
                terms.insert((g, h), t);
            }
            Err(r) => vanishing.push((g, h, r)),
        }
    }
    BracketReport { result, terms, vanishing }
}

/// Gerstenhaber bracket of two invariant reduced cocycles.
pub fn gerstenhaber(group: &Group, x: &Cochain, y: &Cochain) -> Result<BracketReport> {
    check_input(group, x, "first argument")?;
    check_input(group, y, "second argument")?;
    Ok(bracket_unchecked(group, x, y))
}

/// Whether both inputs are supported off the action kernel with exterior
/// part exactly `det_g^⊥` on every component.
pub fn minimal_degree_vanishing(group: &Group, x: &Cochain, y: &Cochain) -> bool {
    [x, y].iter().all(|c| {
        c.components()
            .keys()
            .all(|&g| !group.kernel.contains(&g) && c.degree == group.geometry(g).codim)
    })
}

pub fn perp_vanishing_applies(group: &Group, g: usize, h: usize) -> bool {
    group.perp_vanishing_applies(g, h)
}
