//! Grow the ten-key digital search tree, list where every key went, then
//! probe an eleventh key without inserting it.
//!
//! ```bash
//! cargo run -p renewal-dst --example dst_figure
//! ```

use renewal_dst::dst::{build, knuth_corpus, BitString};

fn main() -> renewal_dst::Result<()> {
    let corpus = knuth_corpus();
    let (tree, reports) = build(&corpus)?;

    println!("{:<6} {:<16} {:>5}  {:<6} side", "key", "bits", "depth", "parent");
    for ((label, bits), r) in corpus.iter().zip(&reports) {
        println!(
            "{label:<6} {:<16} {:>5}  {:<6} {}",
            bits.to_string(),
            r.depth,
            r.parent.as_deref().unwrap_or("-"),
            r.side.as_str()
        );
    }

    let probe: BitString = "011100".parse()?;
    let r = tree.probe(&probe)?;
    println!(
        "\nprobe {probe}: depth {}, {} child of {}",
        r.depth,
        r.side.as_str(),
        r.parent.as_deref().unwrap_or("-")
    );

    println!("\nnode paths:");
    for (label, path) in tree.node_paths() {
        println!("  {label:<6} {}", if path.is_empty() { "(root)".into() } else { path.to_string() });
    }
    Ok(())
}
