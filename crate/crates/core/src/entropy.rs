//! Growth of `ln |B_n|` and the tree entropy `h(X) = lim ln ln |B_n| / n`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::decision::{count_blocks, finite_type, Tsft};
use crate::error::{Error, Result};
use crate::mixing::{Property, Status, Verdict};
use crate::relation::LocalRelation;
use crate::shift::TreeShift;

pub const DEFAULT_MAX_HEIGHT: usize = 20;

/// Natural logarithm of a big integer (`-inf` for zero).
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_string().parse::<f64>().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).try_into().expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ℓ_n(a) = ln c_n(a)` for `n = 1..=max_n`, over the relation's base alphabet.
fn per_symbol_logs(t: &Tsft, max_n: usize) -> Vec<Vec<f64>> {
    let rel: &LocalRelation = &t.rel;
    let size = rel.base_size();
    let mut cur: Vec<f64> = (0..size).map(|a| if rel.core().contains(a) { 0.0 } else { f64::NEG_INFINITY }).collect();
    let mut rows = vec![cur.clone()];
    for _ in 1..max_n {
        let next: Vec<f64> = match &t.vertex {
            // vertex shifts factor over directions: ℓ(a) = Σ_i ln Σ_b A_i(a,b) e^{ℓ(b)}
            Some(v) => (0..size)
                .map(|a| {
                    if !rel.core().contains(a) {
                        return f64::NEG_INFINITY;
                    }
                    (0..v.arity())
                        .map(|i| log_sum_exp(rel.core().iter().filter(|&b| v.allows(i, a, b)).map(|b| cur[b])))
                        .sum()
                })
                .collect(),
            _ => {
                let mut terms: Vec<Vec<f64>> = vec![Vec::new(); size];
                for c in rel.cells() {
                    terms[c.parent].push(c.children.iter().map(|&b| cur[b]).sum());
                }
                terms.into_iter().map(log_sum_exp).collect()
            }
        };
        cur = next;
        rows.push(cur.clone());
    }
    rows
}

/// `L_n = ln |B_n(X)|` for `n = 1..=max_n`.
pub fn log_count_sequence(x: &TreeShift, max_n: usize) -> Result<Vec<f64>> {
    if max_n == 0 {
        return Err(Error::Schema("maximum height must be at least 1".into()));
    }
    match x {
        TreeShift::LevelConstant(_) => {
            let k = x.alphabet().len() as f64;
            Ok((1..=max_n).map(|n| n as f64 * k.ln()).collect())
        }
        TreeShift::SoficImage(_) => {
            let mut out = Vec::with_capacity(max_n);
            for n in 1..=max_n {
                let c = count_blocks(x, n)?;
                if c.total == BigUint::ZERO {
                    return Err(Error::EmptyShift);
                }
                out.push(ln_big(&c.total));
            }
            Ok(out)
        }
        _ => {
            let t = finite_type(x)?;
            if t.rel.core().is_empty() {
                return Err(Error::EmptyShift);
            }
            match &t.recoded {
                None => Ok(per_symbol_logs(&t, max_n).iter().map(|row| log_sum_exp(row.iter().copied())).collect()),
                Some((m, _)) => {
                    let m = *m;
                    let mut out = Vec::with_capacity(max_n);
                    for n in 1..m.min(max_n + 1) {
                        out.push(ln_big(&count_blocks(x, n)?.total));
                    }
                    if max_n >= m {
                        let rows = per_symbol_logs(&t, max_n - m + 1);
                        out.extend(rows.iter().map(|row| log_sum_exp(row.iter().copied())));
                    }
                    Ok(out)
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyRow {
    pub n: usize,
    pub log_count: f64,
    /// `ln(L_n) / n`, or 0 when `|B_n| = 1`.
    pub estimate: f64,
    pub singleton: bool,
    /// Exact `|B_n|` in decimal, for heights within the exact range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    pub rows: Vec<EntropyRow>,
    pub estimate: f64,
    /// `e_n - e_{n-1}` for `n = 2..=N`.
    pub differences: Vec<f64>,
    /// Magnitude of the last successive difference.
    pub tolerance_hint: f64,
}

pub fn entropy_estimate(x: &TreeShift, max_height: usize) -> Result<EntropyEstimate> {
    entropy_estimate_with(x, max_height, 0)
}

/// As [`entropy_estimate`], also reporting exact counts for `n ≤ exact_until`.
pub fn entropy_estimate_with(x: &TreeShift, max_height: usize, exact_until: usize) -> Result<EntropyEstimate> {
    if max_height < 2 {
        return Err(Error::Schema("entropy needs a maximum height of at least 2".into()));
    }
    let logs = log_count_sequence(x, max_height)?;
    if logs.iter().all(|&l| l <= 1e-12) {
        return Err(Error::DegenerateSingleton(max_height));
    }
    let mut rows = Vec::with_capacity(max_height);
    for (i, &l) in logs.iter().enumerate() {
        let n = i + 1;
        let singleton = l <= 1e-12;
        let estimate = if singleton { 0.0 } else { l.ln() / n as f64 };
        let exact = if n <= exact_until { Some(count_blocks(x, n)?.total.to_string()) } else { None };
        rows.push(EntropyRow { n, log_count: l, estimate, singleton, exact });
    }
    let differences: Vec<f64> = rows.windows(2).map(|w| w[1].estimate - w[0].estimate).collect();
    let tolerance_hint = differences.last().map_or(0.0, |d| d.abs());
    let estimate = rows.last().expect("nonempty").estimate;
    Ok(EntropyEstimate { rows, estimate, differences, tolerance_hint })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub l: usize,
    pub height: usize,
    pub log_count: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub code_length: usize,
    pub kappa: usize,
    pub rows: Vec<BoundRow>,
    pub estimate: f64,
    pub estimate_floor: f64,
    pub estimate_holds: bool,
    pub holds: bool,
}

/// For a block gluing shift with code length `k`, checks `L_{lk+1} ≥ 2(2^l - 1) ln κ` for
/// every `lk + 1 ≤ N` and `e_N ≥ ln 2 - tolerance`.
pub fn check_bg_entropy_bound(x: &TreeShift, max_height: usize, verdict: &Verdict, tolerance: f64) -> Result<BoundReport> {
    let implies_bg = matches!(verdict.property, Property::Bg | Property::Si | Property::Ubg | Property::Usi);
    if !implies_bg || verdict.status != Status::Verified {
        return Err(Error::PreconditionNotVerified(format!("{} is {}", verdict.property, verdict.status)));
    }
    let code = verdict
        .witness_code
        .as_ref()
        .ok_or_else(|| Error::PreconditionNotVerified("verdict carries no witness code".into()))?;
    if !x.is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    let k = code.max_len();
    let kappa = finite_type(x)?.projected_core().len();
    let logs = log_count_sequence(x, max_height)?;
    let mut rows = Vec::new();
    let mut l = 1;
    while l * k < max_height {
        let height = l * k + 1;
        let bound = 2.0 * ((1u64 << l.min(62)) - 1) as f64 * (kappa as f64).ln();
        let log_count = logs[height - 1];
        let margin = log_count - bound;
        rows.push(BoundRow { l, height, log_count, bound, margin, holds: margin >= -1e-9 * bound.max(1.0) });
        l += 1;
    }
    let estimate = entropy_estimate(x, max_height)?.estimate;
    let estimate_floor = std::f64::consts::LN_2 - tolerance;
    let estimate_holds = estimate >= estimate_floor;
    let holds = estimate_holds && rows.iter().all(|r| r.holds);
    Ok(BoundReport { code_length: k, kappa, rows, estimate, estimate_floor, estimate_holds, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn full_shift_closed_form() {
        let logs = log_count_sequence(&fixtures::full_shift(2), 12).unwrap();
        for (i, l) in logs.iter().enumerate() {
            let expected = ((1u64 << (i + 1)) - 1) as f64 * std::f64::consts::LN_2;
            assert!((l - expected).abs() <= 1e-9 * expected.max(1.0), "n = {}", i + 1);
        }
        let e = entropy_estimate(&fixtures::full_shift(2), 20).unwrap();
        assert!((e.estimate - std::f64::consts::LN_2).abs() < 0.02);
    }

    #[test]
    fn swap_shift_has_two_blocks_per_height() {
        let logs = log_count_sequence(&fixtures::irreducible_zero(), 20).unwrap();
        assert!(logs.iter().all(|l| (l - 2f64.ln()).abs() < 1e-12));
        let e = entropy_estimate(&fixtures::irreducible_zero(), 20).unwrap();
        assert!((e.estimate - (2f64.ln().ln() / 20.0)).abs() < 1e-12);
        assert!(e.estimate.abs() < 0.02);
    }

    #[test]
    fn log_and_exact_agree() {
        for x in [fixtures::full_shift(3), fixtures::golden_mean(), fixtures::no_constant_cells(), fixtures::swap_identity(), fixtures::level_constant(3)] {
            let logs = log_count_sequence(&x, 10).unwrap();
            for (i, l) in logs.iter().enumerate() {
                let exact = ln_big(&count_blocks(&x, i + 1).unwrap().total);
                assert!((l - exact).abs() <= 1e-9 * l.max(1.0), "{} n = {}", x.kind(), i + 1);
            }
        }
    }

    #[test]
    fn empty_and_singleton_shifts_are_errors() {
        let zero = TreeShift::parse_str(r#"{"kind":"vertex","matrices":[[[0,0],[0,0]],[[0,0],[0,0]]]}"#).unwrap();
        assert!(matches!(entropy_estimate(&zero, 5), Err(Error::EmptyShift)));
        let one = TreeShift::parse_str(r#"{"kind":"vertex","matrices":[[[1,0],[0,0]],[[1,0],[0,0]]]}"#).unwrap();
        assert!(matches!(entropy_estimate(&one, 5), Err(Error::DegenerateSingleton(5))));
    }

    #[test]
    fn ln_big_matches_small_values() {
        assert!((ln_big(&BigUint::from(1000u32)) - 1000f64.ln()).abs() < 1e-12);
        let huge = BigUint::from(1u32) << 5000u32;
        assert!((ln_big(&huge) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
