//! Entropy estimates `ln(ln |B_n|) / n` and the block gluing lower bound.

use treeshift::entropy::{check_bg_entropy_bound, entropy_estimate};
use treeshift::fixtures;
use treeshift::mixing::{check_property, Budgets, Property};

fn main() -> treeshift::Result<()> {
    for (name, x) in [
        ("full", fixtures::full_shift(2)),
        ("swap", fixtures::irreducible_zero()),
        ("golden mean", fixtures::golden_mean()),
        ("forbidden constant cells", fixtures::no_constant_cells()),
        ("level constant", fixtures::level_constant(2)),
    ] {
        let e = entropy_estimate(&x, 20)?;
        println!("{name:>26}: e_20 = {:.4} (last step {:.1e})", e.estimate, e.tolerance_hint);
    }

    let x = fixtures::no_constant_cells();
    let bg = check_property(&x, Property::Bg, &Budgets::default())?;
    let report = check_bg_entropy_bound(&x, 15, &bg, 0.1)?;
    println!("bound with code length {} and {} symbols:", report.code_length, report.kappa);
    for r in &report.rows {
        println!("  L_{:<2} = {:>10.2} >= {:>10.2}  {}", r.height, r.log_count, r.bound, if r.holds { "ok" } else { "FAILS" });
    }
    println!("  e_15 = {:.4} >= {:.4}: {}", report.estimate, report.estimate_floor, report.estimate_holds);
    Ok(())
}
