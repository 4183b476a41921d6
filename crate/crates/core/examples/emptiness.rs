//! Emptiness, essential cores and pattern extension.

use treeshift::decision::{essential_core, extend_pattern, is_empty, locally_admissible};
use treeshift::{fixtures, TreeShift};

fn main() -> treeshift::Result<()> {
    let shifts = [
        ("swap/identity", fixtures::swap_identity()),
        ("golden mean", fixtures::golden_mean()),
        ("forbidden constant cells", fixtures::no_constant_cells()),
        ("random", fixtures::random_one_step(2, 4, 0.15, 7)),
    ];
    for (name, x) in &shifts {
        let e = is_empty(x, 3)?;
        let core = essential_core(x)?;
        println!("{name}: empty = {}, core = {:?}, deleted = {}", e.empty, core.names(), core.trace.len());
        if let Some(w) = e.witness {
            println!("  witness 3-block {}", w.render(x.alphabet()));
        }
    }

    // a shift whose only surviving symbol is 0
    let x = TreeShift::parse_str(r#"{"kind":"vertex","matrices":[[[1,1],[0,0]],[[1,0],[0,1]]]}"#)?;
    let core = essential_core(&x)?;
    println!("vertex shift core {:?}", core.names());
    for d in &core.trace {
        println!("  round {}: delete {} (direction {:?} has no successor)", d.round, x.alphabet().name(d.symbol), d.direction);
    }

    let g = fixtures::golden_mean();
    let u = fixtures::pattern(2, &[("", 0), ("0", 1)]);
    println!("golden mean: {} admissible = {}", u.render(g.alphabet()), locally_admissible(&u, &g)?);
    let b = extend_pattern(&g, &u, 3)?;
    println!("  extended to {}", b.render(g.alphabet()));
    Ok(())
}
