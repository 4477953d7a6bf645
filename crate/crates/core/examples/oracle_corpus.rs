//! Generate the labelled synthetic corpus and export it as TSV.
//!
//!     cargo run --example oracle_corpus -- corpus.tsv

use mediafp::kb::KnowledgeBase;
use mediafp::oracle::{corpus_to_tsv, generate_corpus, parse_corpus_tsv, run_selftest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;
    let corpus = generate_corpus(&kb);
    let tsv = corpus_to_tsv(&corpus);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, &tsv)?,
        None => print!("{tsv}"),
    }
    assert_eq!(parse_corpus_tsv(&tsv)?, corpus);

    let report = run_selftest(&kb);
    eprintln!("{} entries; selftest {} cases, {} failures", corpus.len(), report.cases, report.failures.len());
    for f in &report.failures {
        eprintln!("  {}: {}", f.record_id, f.reason);
    }
    Ok(())
}
