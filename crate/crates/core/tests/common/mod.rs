//! Shared fixtures for the integration tests.
#![allow(dead_code)] // each test binary uses its own subset

use simseek_core::corpus::{parse_qrels, tokenize, Document, QrelsTable, Topic};
use simseek_core::engine::{build_index, Index};

pub fn doc(id: &str, title: &str, body: &str) -> Document {
    Document::new(id, tokenize(title), tokenize(body))
}

/// A small astronomy collection with graded judgments for topic 303.
pub fn hubble_corpus() -> (Index, Topic, QrelsTable) {
    let docs = vec![
        doc(
            "d1",
            "mirror flaw",
            "the hubble telescope mirror flaw was repaired during a shuttle mission",
        ),
        doc(
            "d2",
            "deep field",
            "hubble deep field images revealed thousands of distant galaxies a major achievement",
        ),
        doc(
            "d3",
            "telescope budget",
            "the telescope budget was debated in committee hearings for years",
        ),
        doc(
            "d4",
            "expansion rate",
            "hubble observations measured the expansion rate of the universe with new accuracy",
        ),
        doc(
            "d5",
            "rock dust",
            "rock dust and lens cleaning are routine maintenance topics",
        ),
        doc(
            "d6",
            "space station",
            "the space station hosts experiments unrelated to telescopes",
        ),
    ];
    let index = build_index(docs).unwrap();
    let topic = Topic {
        id: "303".into(),
        title: tokenize("hubble telescope achievements"),
        description: tokenize("positive accomplishments of the hubble telescope"),
        narrative: tokenize("documents describing new data or better quality data are relevant"),
    };
    let qrels = parse_qrels(
        "303 0 d2 3\n\
         303 0 d4 2\n\
         303 0 d1 1\n\
         303 0 d3 0\n\
         303 0 d5 0\n\
         303 0 d6 0\n",
    )
    .unwrap();
    (index, topic, qrels)
}
