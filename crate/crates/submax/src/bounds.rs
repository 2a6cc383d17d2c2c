//! Modular bounds anchored at a set.
//!
//! For the objective the crate uses a permutation-chain lower bound: order
//! the ground set so the anchor's members come first, take each element's
//! marginal gain along the resulting chain of prefixes, and read the sums of
//! those gains as a modular function. For submodular `g` this never exceeds
//! `g`, and on the anchor itself it telescopes to `g(anchor)` exactly.
//!
//! For the constraint the crate uses modular upper bounds built from
//! marginal gains, parameterized by a variational set: shrinking the
//! variational subset only loosens the bound, and the divergence of the
//! bound from the true value is nonnegative when the variational subset is
//! the intersection of the anchor with the queried set.

use crate::error::Error;
use crate::setfn::{Oracle, SubsetMask};
use crate::TOLERANCE;

/// An ordering of the ground set whose prefixes climb through a fixed
/// anchor: anchor members in ascending index order, then the remaining
/// elements in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationChain {
    anchor: SubsetMask,
    order: Vec<usize>,
}

impl PermutationChain {
    pub fn from_anchor(anchor: &SubsetMask) -> Self {
        let mut order = anchor.indices();
        order.extend(anchor.complement().iter());
        PermutationChain { anchor: anchor.clone(), order }
    }

    pub fn anchor(&self) -> &SubsetMask {
        &self.anchor
    }

    /// Elements in chain order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The chain prefix holding the first `k` elements.
    pub fn prefix(&self, k: usize) -> SubsetMask {
        SubsetMask::from_indices(self.anchor.universe(), self.order[..k].iter().copied())
    }
}

/// A modular function `X -> sum of weight[j] for j in X`, remembered
/// together with the anchor it was derived at.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularBound {
    anchor: SubsetMask,
    weights: Vec<f64>,
}

impl ModularBound {
    pub fn anchor(&self) -> &SubsetMask {
        &self.anchor
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    /// Per-element weights indexed by element.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn evaluate(&self, x: &SubsetMask) -> f64 {
        assert_eq!(
            x.universe(),
            self.anchor.universe(),
            "mask universe does not match bound"
        );
        x.iter().map(|j| self.weights[j]).sum()
    }
}

/// Builds the modular lower bound on `g` along `chain` by taking marginal
/// gains of consecutive chain prefixes. Requires normalized `g`
/// (`g(empty) = 0`) for the pointwise lower bound property to hold.
///
/// A chain weight more than a tolerance below zero means `g` is not
/// monotone and reports a contract breach naming the element.
pub fn modular_lower_bound(g: &Oracle, chain: &PermutationChain) -> Result<ModularBound, Error> {
    let n = g.universe();
    assert_eq!(chain.anchor().universe(), n, "chain universe does not match oracle");
    let mut weights = vec![0.0; n];
    let mut prefix = SubsetMask::empty(n);
    let mut previous = g.evaluate(&prefix);
    for &j in chain.order() {
        prefix.insert(j);
        let value = g.evaluate(&prefix);
        let weight = value - previous;
        if weight < -TOLERANCE {
            return Err(Error::ContractBreach(format!(
                "negative chain weight {weight} for element {j}"
            )));
        }
        weights[j] = weight;
        previous = value;
    }
    Ok(ModularBound { anchor: chain.anchor().clone(), weights })
}

/// The modular upper bound on `f` anchored at `anchor` with variational
/// subset `theta`:
///
/// `f(anchor) - sum over j in anchor minus y of f(j | anchor - j)
///            + sum over j in y minus anchor of f(j | theta)`.
///
/// Requires `theta` contained in `anchor`. The result dominates `f(y)`
/// whenever `theta` is also contained in `y`, and shrinking `theta` can only
/// increase it.
pub fn nemhauser_upper_bound(
    f: &Oracle,
    anchor: &SubsetMask,
    theta: &SubsetMask,
    y: &SubsetMask,
) -> Result<f64, Error> {
    if !theta.is_subset_of(anchor) {
        return Err(Error::ThetaOutsideAnchor);
    }
    let mut value = f.evaluate(anchor);
    for j in anchor.difference(y).iter() {
        value -= f.marginal_gain(j, &anchor.without(j));
    }
    for j in y.difference(anchor).iter() {
        value += f.marginal_gain(j, theta);
    }
    Ok(value)
}

/// The companion upper bound parameterized by a superset `psi` of the
/// anchor:
///
/// `f(anchor) + sum over j in y minus anchor of f(j | anchor)
///            - sum over j in anchor minus y of f(j | psi - j)`.
pub fn nemhauser_upper_bound_alt(
    f: &Oracle,
    anchor: &SubsetMask,
    psi: &SubsetMask,
    y: &SubsetMask,
) -> Result<f64, Error> {
    if !anchor.is_subset_of(psi) {
        return Err(Error::PsiMissingAnchor);
    }
    let mut value = f.evaluate(anchor);
    for j in y.difference(anchor).iter() {
        value += f.marginal_gain(j, anchor);
    }
    for j in anchor.difference(y).iter() {
        value -= f.marginal_gain(j, &psi.without(j));
    }
    Ok(value)
}

/// Gap between the upper bound taken at the canonical variational subset
/// `anchor intersect y` and the true value `f(y)`. Nonnegative for
/// submodular `f`; a gap beyond tolerance below zero reports a contract
/// breach.
pub fn nemhauser_divergence(
    f: &Oracle,
    anchor: &SubsetMask,
    y: &SubsetMask,
) -> Result<f64, Error> {
    let theta = anchor.intersection(y);
    let bound = nemhauser_upper_bound(f, anchor, &theta, y)?;
    let gap = bound - f.evaluate(y);
    if gap < -TOLERANCE {
        return Err(Error::ContractBreach(format!(
            "negative divergence {gap} at anchor {anchor:?} and set {y:?}"
        )));
    }
    Ok(gap)
}
