#![allow(dead_code)]

use fracdom_core::Distribution;
use proptest::prelude::*;

/// Up to `max_atoms` atoms with values in `[lo, hi]` and normalised weights.
pub fn dist(lo: f64, hi: f64, max_atoms: usize) -> impl Strategy<Value = Distribution> {
    prop::collection::vec((lo..hi, 0.05f64..1.0), 1..=max_atoms).prop_map(|raw| {
        let total: f64 = raw.iter().map(|&(_, w)| w).sum();
        Distribution::new(raw.into_iter().map(|(v, w)| (v, w / total))).unwrap()
    })
}

/// Lower-quantile integral `∫_0^a q(r) dr` computed from scratch.
pub fn lower_integral(d: &Distribution, a: f64) -> f64 {
    let mut atoms: Vec<(f64, f64)> = d.atoms().iter().map(|x| (x.value, x.prob)).collect();
    atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut left = a;
    let mut acc = 0.0;
    for (v, p) in atoms {
        let w = p.min(left.max(0.0));
        acc += w * v;
        left -= w;
    }
    acc
}

/// Union of cumulative probabilities of both laws, including 0 and 1.
pub fn merged_levels(x: &Distribution, y: &Distribution) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    for d in [x, y] {
        let mut c = 0.0;
        for a in d.atoms() {
            c += a.prob;
            out.push(c.min(1.0));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    out
}

/// `X ≤_SSD Y` via the lower-quantile integrals at all merged levels.
pub fn ssd_oracle(x: &Distribution, y: &Distribution, tol: f64) -> bool {
    merged_levels(x, y).into_iter().all(|a| lower_integral(y, a) - lower_integral(x, a) >= -tol)
}

/// `∫_0^a e^{c q(r)} dr`.
pub fn exp_integral(d: &Distribution, c: f64, a: f64) -> f64 {
    let mut left = a;
    let mut acc = 0.0;
    for atom in d.atoms() {
        let w = atom.prob.min(left.max(0.0));
        acc += w * (c * atom.value).exp();
        left -= w;
    }
    acc
}

/// Smallest `m` with `Y ≤ X + m` in the CARA(`c`) order, as the supremum of
/// `log(H_Y / H_X) / c` (or `(G_Y - G_X) / a` for `c = 0`) over merged levels
/// and the limit at 0.
pub fn cara_base_oracle(x: &Distribution, y: &Distribution, c: f64) -> f64 {
    let mut best = y.min() - x.min();
    for a in merged_levels(x, y).into_iter().filter(|&a| a > 0.0) {
        let v = if c == 0.0 {
            (lower_integral(y, a) - lower_integral(x, a)) / a
        } else {
            (exp_integral(y, c, a).ln() - exp_integral(x, c, a).ln()) / c
        };
        best = best.max(v);
    }
    best
}

/// Replaces the atoms with indices in `i..=j` by one atom at their conditional
/// `v`-certainty equivalent, which moves the law up in the `v`-SD order.
pub fn contract(x: &Distribution, v: &fracdom_core::Utility, i: usize, j: usize) -> Distribution {
    let atoms = x.atoms();
    let (i, j) = (i.min(atoms.len() - 1), j.min(atoms.len() - 1));
    let (i, j) = (i.min(j), i.max(j));
    let block = &atoms[i..=j];
    let mass: f64 = block.iter().map(|a| a.prob).sum();
    let ev: f64 = block.iter().map(|a| a.prob * v.eval(a.value).unwrap()).sum::<f64>() / mass;
    let lo = block[0].value;
    let hi = block[block.len() - 1].value;
    let ce = v.inverse(ev).unwrap().clamp(lo, hi);
    let rest = atoms.iter().enumerate().filter(|(k, _)| *k < i || *k > j).map(|(_, a)| (a.value, a.prob));
    Distribution::new(rest.chain(std::iter::once((ce, mass)))).unwrap()
}
