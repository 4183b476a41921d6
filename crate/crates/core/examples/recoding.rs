//! Higher-block recoding into a vertex shift, and the block bijection it induces.

use treeshift::decision::count_blocks;
use treeshift::entropy::entropy_estimate;
use treeshift::shift::recode_to_vertex;
use treeshift::{fixtures, TreeShift};

fn main() -> treeshift::Result<()> {
    let g = fixtures::golden_mean();
    let (v, code) = recode_to_vertex(&g)?;
    println!("recoded symbols: {:?} (window {})", v.alphabet().names(), code.window());
    for dir in 0..v.arity() {
        println!("  A_{dir} = {:?}", v.matrix(dir).iter().map(|r| r.iter().map(|&e| e as u8).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    let recoded = TreeShift::Vertex(v);
    for n in 1..=5 {
        println!("  |B_{}(X)| = {:>6}   |B_{n}(X')| = {:>6}", n + 1, count_blocks(&g, n + 1)?.total, count_blocks(&recoded, n)?.total);
    }
    let (a, b) = (entropy_estimate(&g, 20)?.estimate, entropy_estimate(&recoded, 20)?.estimate);
    println!("e_20: {a:.4} vs {b:.4}");
    Ok(())
}
