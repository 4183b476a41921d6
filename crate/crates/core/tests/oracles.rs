//! Library results against independent brute-force computations.

use std::collections::{BTreeMap, BTreeSet};

use treeshift::cpc::cpc_count;
use treeshift::decision::{count_blocks, enumerate_blocks, extend_pattern, is_empty, locally_admissible};
use treeshift::entropy::{ln_big, log_count_sequence};
use treeshift::periodic::{periodic_from_cpc, search_periodic, PeriodicSearch};
use treeshift::shift::{image_blocks, recode_to_vertex};
use treeshift::word::block_size;
use treeshift::{enumerate_cpcs, fixtures, Block, CompletePrefixCode, TreeShift, Word};

type Tuples = BTreeSet<Vec<usize>>;

fn tuples(x: &TreeShift) -> Tuples {
    x.one_step().expect("one-step form").allowed().clone()
}

/// Whether `a` roots a height-`h` block; plain recursion without memoization.
fn roots_block(t: &Tuples, a: usize, h: usize) -> bool {
    h == 1 || t.iter().any(|tu| tu[0] == a && tu[1..].iter().all(|&b| roots_block(t, b, h - 1)))
}

/// Every labeling of a height-`h` block, kept when each internal cell is allowed.
fn brute_blocks(t: &Tuples, arity: usize, k: usize, h: usize) -> Vec<Vec<usize>> {
    let n = block_size(arity, h);
    let internal = block_size(arity, h - 1);
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    loop {
        let ok = (0..internal).all(|i| {
            let mut tu = vec![labels[i]];
            tu.extend((0..arity).map(|c| labels[arity * i + 1 + c]));
            t.contains(&tu)
        });
        if ok {
            out.push(labels.clone());
        }
        let Some(i) = (0..n).rev().find(|&i| labels[i] + 1 < k) else { break };
        labels[i] += 1;
        labels[i + 1..].iter_mut().for_each(|s| *s = 0);
    }
    out
}

/// Height-`h` blocks whose leaves all root height-`extra` blocks.
fn brute_extensible(t: &Tuples, arity: usize, k: usize, h: usize, extra: usize) -> Vec<Vec<usize>> {
    let first_leaf = block_size(arity, h - 1);
    brute_blocks(t, arity, k, h)
        .into_iter()
        .filter(|b| b[first_leaf..].iter().all(|&s| roots_block(t, s, extra)))
        .collect()
}

#[test]
fn emptiness_matches_height_five_search() {
    for seed in 0..200 {
        let k = 1 + (seed as usize % 4);
        let x = fixtures::random_one_step(2, k, 0.12 + 0.05 * (seed % 5) as f64, seed);
        let t = tuples(&x);
        let brute = (0..k).any(|a| roots_block(&t, a, 5));
        assert_eq!(!is_empty(&x, 2).unwrap().empty, brute, "seed {seed}");
    }
}

#[test]
fn counts_match_exhaustive_labelings() {
    let cases = [fixtures::golden_mean(), fixtures::full_shift(2), fixtures::no_constant_cells(), fixtures::irreducible_zero()];
    for x in cases.iter().cloned().chain((0..20).map(|s| fixtures::random_one_step(2, 2, 0.5, 100 + s))) {
        let t = tuples(&x);
        for h in 1..=4 {
            // c_n counts blocks that extend to points; for these sizes six more levels suffice
            let brute = brute_extensible(&t, 2, x.alphabet().len(), h, 6).len();
            assert_eq!(count_blocks(&x, h).unwrap().total, brute.into(), "{} h = {h}", x.canonical_json());
        }
    }
}

#[test]
fn golden_mean_counts_are_tree_counts() {
    let x = fixtures::golden_mean();
    let t = tuples(&x);
    let brute: Vec<usize> = (1..=4).map(|h| brute_blocks(&t, 2, 2, h).len()).collect();
    assert_eq!(brute, vec![2, 3, 9, 66]);
    let lib: Vec<String> = (1..=5).map(|n| count_blocks(&x, n).unwrap().total.to_string()).collect();
    assert_eq!(lib, ["2", "3", "9", "66", "3987"]);
}

#[test]
fn enumeration_matches_brute_force_and_is_sorted() {
    let x = fixtures::random_one_step(2, 3, 0.3, 41);
    let t = tuples(&x);
    for h in 1..=3 {
        let lib = enumerate_blocks(&x, h, 100_000).unwrap();
        let brute: BTreeSet<Vec<usize>> = brute_extensible(&t, 2, 3, h, 8).into_iter().collect();
        let got: BTreeSet<Vec<usize>> = lib.iter().map(|b| b.labels().to_vec()).collect();
        assert_eq!(got, brute);
        assert!(lib.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn extension_is_admissible_and_agrees() {
    for seed in 0..30 {
        let x = fixtures::random_one_step(2, 3, 0.35, 500 + seed);
        if is_empty(&x, 2).unwrap().empty {
            continue;
        }
        for b in enumerate_blocks(&x, 2, 1000).unwrap() {
            let u = b.to_pattern();
            let e = extend_pattern(&x, &u, 4).unwrap();
            assert!(locally_admissible(&e.to_pattern(), &x).unwrap());
            assert_eq!(e.truncate(2), b);
        }
    }
}

#[test]
fn log_domain_matches_exact_counts() {
    for seed in 0..10 {
        let x = fixtures::random_one_step(2, 3, 0.4, 900 + seed);
        if is_empty(&x, 2).unwrap().empty {
            continue;
        }
        let logs = log_count_sequence(&x, 10).unwrap();
        for (i, l) in logs.iter().enumerate() {
            let exact = ln_big(&count_blocks(&x, i + 1).unwrap().total);
            assert!((l - exact).abs() <= 1e-9 * exact.abs().max(1.0));
        }
    }
}

#[test]
fn recoding_is_a_block_bijection() {
    let mut shifts = vec![fixtures::golden_mean()];
    shifts.extend((0..10).map(|s| fixtures::random_one_step(2, 3, 0.4, 300 + s)));
    for x in shifts {
        if is_empty(&x, 2).unwrap().empty {
            continue;
        }
        let (v, _) = recode_to_vertex(&x).unwrap();
        let r = TreeShift::Vertex(v);
        for n in 1..=5 {
            assert_eq!(count_blocks(&x, n + 1).unwrap().total, count_blocks(&r, n).unwrap().total);
        }
    }
}

#[test]
fn even_shift_two_blocks_by_brute_force() {
    // images of every admissible 3-block of the golden mean shift under the window-2 map
    let g = fixtures::golden_mean();
    let t = tuples(&g);
    let mut images = BTreeSet::new();
    for b in brute_extensible(&t, 2, 2, 3, 6) {
        let out = |i: usize| if b[i] == 0 && b[2 * i + 1] == 0 && b[2 * i + 2] == 0 { 0 } else { 1 };
        images.insert(vec![out(0), out(1), out(2)]);
    }
    let TreeShift::SoficImage(code) = fixtures::even_shift() else { unreachable!() };
    let lib: BTreeSet<Vec<usize>> = image_blocks(&code, 2, 1000).unwrap().iter().map(|b| b.labels().to_vec()).collect();
    assert_eq!(lib, images);
}

#[test]
fn cpc_counts_are_fuss_catalan() {
    for d in 2..=3 {
        for leaves in 2..=9 {
            let got = enumerate_cpcs(d, leaves).filter(|c| c.leaf_count() == leaves).count();
            assert_eq!(cpc_count(d, leaves), got.into(), "d = {d}, leaves = {leaves}");
        }
    }
    // 1 + 2 + 5 + 14 + 42 + 132 + 429 binary codes with at most 8 leaves
    assert_eq!(enumerate_cpcs(2, 8).count(), 625);
}

/// Labelings of the interior of `code` whose every cell is allowed, children in `code`
/// taking the root label.
fn brute_periodic(t: &Tuples, k: usize, code: &CompletePrefixCode) -> bool {
    let interior = code.interior();
    let index: BTreeMap<&Word, usize> = interior.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let root = index[&Word::root()];
    let total = k.pow(interior.len() as u32);
    (0..total).any(|mut c| {
        let labels: Vec<usize> = (0..interior.len())
            .map(|_| {
                let s = c % k;
                c /= k;
                s
            })
            .collect();
        interior.iter().all(|y| {
            let mut tu = vec![labels[index[y]]];
            tu.extend((0..2).map(|i| index.get(&y.child(i)).map_or(labels[root], |&j| labels[j])));
            t.contains(&tu)
        })
    })
}

#[test]
fn periodic_search_matches_brute_force() {
    let codes: Vec<CompletePrefixCode> = enumerate_cpcs(2, 4).collect();
    for seed in 0..60 {
        let x = fixtures::random_one_step(2, 1 + seed as usize % 3, 0.3, 700 + seed);
        let t = tuples(&x);
        let k = x.alphabet().len();
        for code in &codes {
            let lib = periodic_from_cpc(&x, code).unwrap();
            assert_eq!(lib.is_some(), brute_periodic(&t, k, code), "seed {seed}, {code}");
        }
        let any = codes.iter().any(|c| brute_periodic(&t, k, c));
        assert_eq!(matches!(search_periodic(&x, 4).unwrap(), PeriodicSearch::Found { .. }), any);
    }
}

#[test]
fn block_layout_round_trips() {
    let b = Block::from_labels(2, 3, vec![0, 1, 1, 0, 0, 0, 0]).unwrap();
    let words: Vec<Word> = b.words().collect();
    assert_eq!(words.len(), 7);
    assert_eq!(b.get(&"10".parse().unwrap()), Some(0));
}
