//! The even tree-shift connects every pair of patterns through `Σ^4`.

use treeshift::mixing::{even_usi_counts, verify_even_treeshift_usi};

fn main() -> treeshift::Result<()> {
    let report = even_usi_counts(3)?;
    let c = &report.counts;
    println!("{} pairs: {} by case fills, {} by some fill per leaf, {} free, {} failed", c.pairs, c.by_case, c.by_union, c.by_free, c.failed);
    for (case, n) in &c.case_hits {
        println!("  case {case:>3}: {n} leaves");
    }
    let v = verify_even_treeshift_usi(3)?;
    println!("USI {} with {}", v.status, v.witness_code.map(|c| c.to_string()).unwrap_or_default());
    for n in &v.notes {
        println!("  {n}");
    }
    Ok(())
}
