use crate::bounds::ModularBound;
use crate::setfn::{Oracle, SubsetMask};
use crate::TOLERANCE;

/// Costs at or below this are treated as zero, making the element free.
const FREE_COST_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Ranked {
    element: usize,
    ratio: f64,
    cost: f64,
}

/// Elements sorted by descending gain-to-cost ratio, ties by ascending
/// index. Zero cost means infinite ratio and sorts first; zero gain with
/// positive cost means ratio zero and sorts last.
fn ranked_elements(bound: &ModularBound, costs: &[f64]) -> Vec<Ranked> {
    let mut ranked: Vec<Ranked> = costs
        .iter()
        .enumerate()
        .map(|(element, &cost)| {
            let ratio = if cost <= FREE_COST_EPS {
                f64::INFINITY
            } else {
                bound.weight(element) / cost
            };
            Ranked { element, ratio, cost: cost.max(0.0) }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.ratio
            .partial_cmp(&a.ratio)
            .expect("ratios are never NaN")
            .then(a.element.cmp(&b.element))
    });
    ranked
}

/// Length of the longest ranked prefix whose cumulative cost stays within
/// the budget.
fn feasible_prefix_len(ranked: &[Ranked], budget: f64) -> usize {
    let mut total = 0.0;
    for (k, r) in ranked.iter().enumerate() {
        total += r.cost;
        if total > budget + TOLERANCE {
            return k;
        }
    }
    ranked.len()
}

fn prefix_mask(n: usize, ranked: &[Ranked], k: usize) -> SubsetMask {
    SubsetMask::from_indices(n, ranked[..k].iter().map(|r| r.element))
}

/// Estimation step costs: members are priced at their marginal gain
/// relative to the rest of the iterate, outsiders relative to the whole
/// iterate.
fn e_step_costs(f: &Oracle, x_t: &SubsetMask) -> Vec<f64> {
    (0..f.universe())
        .map(|j| {
            if x_t.contains(j) {
                f.marginal_gain(j, &x_t.without(j))
            } else {
                f.marginal_gain(j, x_t)
            }
        })
        .collect()
}

/// Maximization step costs: as in the estimation step for members, but
/// outsiders are priced relative to the variational subset.
pub(crate) fn m_step_costs(f: &Oracle, x_t: &SubsetMask, theta_hat: &SubsetMask) -> Vec<f64> {
    (0..f.universe())
        .map(|j| {
            if x_t.contains(j) {
                f.marginal_gain(j, &x_t.without(j))
            } else {
                f.marginal_gain(j, theta_hat)
            }
        })
        .collect()
}

/// Estimation step: picks the variational subset for the next constraint
/// bound. Costs are marginal gains of `f` relative to the current iterate
/// (for members, relative to the iterate minus the element); the tentative
/// set `x_hat` is the longest budget-feasible prefix in ratio order, and the
/// variational subset is its overlap with the current iterate.
///
/// The bound must be anchored at `x_t`.
pub fn e_step(
    g_bound: &ModularBound,
    f: &Oracle,
    x_t: &SubsetMask,
    budget: f64,
) -> (SubsetMask, SubsetMask) {
    assert_eq!(g_bound.anchor(), x_t, "bound must be anchored at the current iterate");
    let n = f.universe();
    let costs = e_step_costs(f, x_t);
    let ranked = ranked_elements(g_bound, &costs);
    let k = feasible_prefix_len(&ranked, budget);
    let x_hat = prefix_mask(n, &ranked, k);
    let theta_hat = x_t.intersection(&x_hat);
    (x_hat, theta_hat)
}

/// Maximization step: maximizes the modular objective bound under the
/// constraint bound induced by `theta_hat`. Costs of elements outside the
/// iterate are marginal gains relative to `theta_hat`; selection is again
/// the longest budget-feasible prefix in ratio order.
///
/// The prefix rule bounds the surrogate cost, not necessarily the true one,
/// so with `strict_repair` the result is re-checked against `f` and trailing
/// prefix elements (lowest ratio first) are dropped until it fits. Returns
/// the next iterate and the number of dropped elements.
pub fn m_step(
    g_bound: &ModularBound,
    f: &Oracle,
    x_t: &SubsetMask,
    theta_hat: &SubsetMask,
    budget: f64,
    strict_repair: bool,
) -> (SubsetMask, usize) {
    assert_eq!(g_bound.anchor(), x_t, "bound must be anchored at the current iterate");
    assert!(
        theta_hat.is_subset_of(x_t),
        "variational subset must be contained in the current iterate"
    );
    let n = f.universe();
    let costs = m_step_costs(f, x_t, theta_hat);
    let ranked = ranked_elements(g_bound, &costs);
    let mut k = feasible_prefix_len(&ranked, budget);
    let mut next = prefix_mask(n, &ranked, k);
    let mut dropped = 0;
    if strict_repair {
        while k > 0 && f.evaluate(&next) > budget + TOLERANCE {
            k -= 1;
            next.remove(ranked[k].element);
            dropped += 1;
        }
    }
    (next, dropped)
}
