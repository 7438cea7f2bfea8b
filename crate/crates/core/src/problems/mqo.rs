//! Multi-query optimisation instances and their QUBO encoding.
//!
//! Plans carry global ids `0..n_plans`; query `q` owns `plans_per_query[q]`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::QuboSpec;
use crate::rng::SplitMix64;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MqoInstance {
    plans_per_query: Vec<Vec<usize>>,
    costs: Vec<f64>,
    savings: BTreeMap<(usize, usize), f64>,
    density: f64,
}

/// Chosen plan id per query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanSelection(pub Vec<usize>);

impl MqoInstance {
    pub fn new(
        plans_per_query: Vec<Vec<usize>>,
        costs: Vec<f64>,
        savings: BTreeMap<(usize, usize), f64>,
        density: f64,
    ) -> Result<Self> {
        let n = costs.len();
        let mut owner = vec![usize::MAX; n];
        for (q, plans) in plans_per_query.iter().enumerate() {
            if plans.is_empty() {
                return Err(Error::invalid("every query needs at least one plan"));
            }
            for &p in plans {
                if p >= n || owner[p] != usize::MAX {
                    return Err(Error::invalid("plan sets must partition the plan ids"));
                }
                owner[p] = q;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::invalid("plan sets must cover every plan"));
        }
        if costs.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Error::invalid("plan costs must be positive"));
        }
        let mut normalized = BTreeMap::new();
        for (&(a, b), &s) in &savings {
            if a >= n || b >= n || owner[a] == owner[b] {
                return Err(Error::invalid("savings must join plans of different queries"));
            }
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::invalid("savings must be non-negative"));
            }
            normalized.insert((a.min(b), a.max(b)), s);
        }
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::invalid("density must lie in [0, 1]"));
        }
        Ok(MqoInstance { plans_per_query, costs, savings: normalized, density })
    }

    pub fn n_queries(&self) -> usize {
        self.plans_per_query.len()
    }

    pub fn n_plans(&self) -> usize {
        self.costs.len()
    }

    pub fn plans_per_query(&self) -> &[Vec<usize>] {
        &self.plans_per_query
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Keys are `(smaller id, larger id)`.
    pub fn savings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.savings
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn query_of(&self, plan: usize) -> Option<usize> {
        self.plans_per_query.iter().position(|ps| ps.contains(&plan))
    }

    /// Pairs of plans belonging to different queries, in lexicographic order.
    pub fn inter_query_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_plans();
        let owner: Vec<usize> = (0..n).map(|p| self.query_of(p).unwrap_or(usize::MAX)).collect();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if owner[a] != owner[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Total cost of a selection: chosen plan costs minus savings among chosen plans.
pub fn mqo_cost(inst: &MqoInstance, sel: &PlanSelection) -> Result<f64> {
    if sel.0.len() != inst.n_queries() {
        return Err(Error::invalid("selection must choose one plan per query"));
    }
    for (q, &p) in sel.0.iter().enumerate() {
        if !inst.plans_per_query[q].contains(&p) {
            return Err(Error::invalid(alloc::format!("plan {p} does not belong to query {q}")));
        }
    }
    let mut cost: f64 = sel.0.iter().map(|&p| inst.costs[p]).sum();
    for (i, &a) in sel.0.iter().enumerate() {
        for &b in &sel.0[i + 1..] {
            cost -= inst.savings.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0);
        }
    }
    Ok(cost)
}

/// One-hot QUBO over plan variables:
/// `sum c_p x_p - sum s_pq x_p x_q + lambda sum_q (sum_{p in P_q} x_p - 1)^2`,
/// with `lambda = 1 + sum c + sum s` unless given.
pub fn mqo_to_qubo(inst: &MqoInstance, penalty: Option<f64>) -> Result<QuboSpec> {
    let lambda = match penalty {
        Some(l) if !(l > 0.0) || !l.is_finite() => return Err(Error::invalid("penalty must be positive")),
        Some(l) => l,
        None => 1.0 + inst.costs.iter().sum::<f64>() + inst.savings.values().sum::<f64>(),
    };
    let mut q = QuboSpec::new(inst.n_plans())?;
    for (p, &c) in inst.costs.iter().enumerate() {
        q.add_linear(p, c - lambda)?;
    }
    for plans in &inst.plans_per_query {
        for (i, &a) in plans.iter().enumerate() {
            for &b in &plans[i + 1..] {
                q.add_quadratic(a, b, 2.0 * lambda)?;
            }
        }
        q.add_offset(lambda);
    }
    for (&(a, b), &s) in &inst.savings {
        if s != 0.0 {
            q.add_quadratic(a, b, -s)?;
        }
    }
    Ok(q)
}

/// Reads a plan selection from a plan-variable assignment (bit `p` of `x`);
/// `None` unless exactly one plan per query is set.
pub fn decode_selection(inst: &MqoInstance, x: usize) -> Option<PlanSelection> {
    let mut sel = Vec::with_capacity(inst.n_queries());
    for plans in &inst.plans_per_query {
        let mut chosen = plans.iter().filter(|&&p| x >> p & 1 == 1);
        let first = *chosen.next()?;
        if chosen.next().is_some() {
            return None;
        }
        sel.push(first);
    }
    Some(PlanSelection(sel))
}

/// Cheapest selection by enumerating every combination of plans.
pub fn mqo_brute_force(inst: &MqoInstance) -> (PlanSelection, f64) {
    let mut idx = vec![0usize; inst.n_queries()];
    let mut best: Option<(PlanSelection, f64)> = None;
    loop {
        let sel = PlanSelection(idx.iter().enumerate().map(|(q, &i)| inst.plans_per_query[q][i]).collect());
        let c = mqo_cost(inst, &sel).expect("selection built from the instance");
        if best.as_ref().map_or(true, |b| c < b.1) {
            best = Some((sel, c));
        }
        let mut q = 0;
        loop {
            if q == idx.len() {
                return best.expect("at least one selection");
            }
            idx[q] += 1;
            if idx[q] < inst.plans_per_query[q].len() {
                break;
            }
            idx[q] = 0;
            q += 1;
        }
    }
}

/// Random instance with `num_queries * plans_per_query` plans.
///
/// Costs are integers uniform in `[1, 20]`. `ceil(d M)` of the `M`
/// inter-query pairs get a saving, picked by a partial Fisher-Yates shuffle;
/// saving values are integers uniform in `[1, 5]` capped at
/// `min(c_a, c_b) - 1`.
pub fn gen_mqo(num_queries: usize, plans_per_query: usize, density: f64, seed: u64) -> Result<MqoInstance> {
    if num_queries < 2 || plans_per_query < 2 {
        return Err(Error::invalid("MQO needs at least 2 queries with 2 plans each"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid("density must lie in [0, 1]"));
    }
    let mut rng = SplitMix64::new(seed);
    let n = num_queries * plans_per_query;
    let groups: Vec<Vec<usize>> =
        (0..num_queries).map(|q| (q * plans_per_query..(q + 1) * plans_per_query).collect()).collect();
    let costs: Vec<f64> = (0..n).map(|_| rng.uniform_int(1, 20) as f64).collect();
    let mut inst = MqoInstance::new(groups, costs, BTreeMap::new(), density)?;

    let mut pairs = inst.inter_query_pairs();
    let m = pairs.len();
    let count = (libm::ceil(density * m as f64 - 1e-9).max(0.0) as usize).min(m);
    for t in 0..count {
        let r = t + rng.below(m - t);
        pairs.swap(t, r);
    }
    for &(a, b) in &pairs[..count] {
        let cap = inst.costs[a].min(inst.costs[b]) - 1.0;
        let v = (rng.uniform_int(1, 5) as f64).min(cap);
        inst.savings.insert((a, b), v);
    }
    Ok(inst)
}

/// The four-query, eight-plan worked example with 0-based plan ids
/// (`p_1` is plan 0).
pub fn mqo_example() -> MqoInstance {
    let groups = vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]];
    let costs = vec![9.0, 10.0, 9.0, 10.0, 11.0, 9.0, 14.0, 9.0];
    let savings: BTreeMap<(usize, usize), f64> = [
        ((0, 2), 1.0),
        ((0, 3), 1.0),
        ((1, 2), 1.0),
        ((1, 3), 5.0),
        ((1, 6), 5.0),
        ((3, 4), 5.0),
        ((4, 6), 5.0),
        ((4, 7), 1.0),
        ((5, 6), 1.0),
        ((5, 7), 1.0),
    ]
    .into_iter()
    .collect();
    let m = 24.0;
    MqoInstance::new(groups, costs, savings, 10.0 / m).expect("example instance is valid")
}
