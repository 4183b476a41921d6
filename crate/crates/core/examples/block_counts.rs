//! Exact block counts and canonical enumeration.

use treeshift::decision::{count_blocks, enumerate_blocks};
use treeshift::fixtures;

fn main() -> treeshift::Result<()> {
    for (name, x) in [("full", fixtures::full_shift(2)), ("golden mean", fixtures::golden_mean()), ("swap", fixtures::irreducible_zero())] {
        let counts: Vec<String> = (1..=5).map(|n| count_blocks(&x, n).map(|c| c.total.to_string())).collect::<Result<_, _>>()?;
        println!("{name}: |B_1..5| = {}", counts.join(", "));
    }
    let g = fixtures::golden_mean();
    let c = count_blocks(&g, 3)?;
    println!("golden mean 3-blocks by root: {:?}", c.per_root.iter().map(|n| n.to_string()).collect::<Vec<_>>());
    for b in enumerate_blocks(&g, 3, 100)? {
        println!("  {}", b.render(g.alphabet()));
    }
    let even = fixtures::even_shift();
    let b2 = enumerate_blocks(&even, 2, 100)?;
    println!("even shift 2-blocks: {}", b2.iter().map(|b| b.render(even.alphabet())).collect::<Vec<_>>().join(" "));
    Ok(())
}
