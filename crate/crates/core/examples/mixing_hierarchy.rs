//! Every mixing property on the standard shifts, with implication checks.

use treeshift::fixtures;
use treeshift::mixing::{hierarchy_report, Budgets};

fn main() -> treeshift::Result<()> {
    let budgets = Budgets { height: 3, cpc_leaves: 16, ..Budgets::default() };
    for (name, x) in [
        ("full", fixtures::full_shift(2)),
        ("golden mean", fixtures::golden_mean()),
        ("swap", fixtures::irreducible_zero()),
        ("forbidden constant cells", fixtures::no_constant_cells()),
        ("level constant", fixtures::level_constant(2)),
    ] {
        let r = hierarchy_report(&x, &budgets)?;
        let cells: Vec<String> = r
            .verdicts
            .iter()
            .map(|v| {
                let code = v.witness_code.as_ref().map(|c| format!(" {c}")).unwrap_or_default();
                format!("{} {}{code}", v.property, v.status)
            })
            .collect();
        println!("{name}:\n  {}", cells.join("\n  "));
        for v in &r.violations {
            println!("  VIOLATION {v}");
        }
    }
    Ok(())
}
