use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simseek_core::corpus::{tokenize, Document, QrelsTable, Topic};

/// A generated collection with planted relevant documents.
pub struct SyntheticCorpus {
    pub docs: Vec<Document>,
    pub topics: Vec<Topic>,
    pub qrels: QrelsTable,
}

const NOISE: &[&str] = &[
    "report", "committee", "budget", "meeting", "general", "various", "common", "filler",
    "routine", "office",
];

/// Build `n_topics` synthetic topics, each with `rel_per_topic` relevant
/// documents built around the topic's own vocabulary plus shared noise, and
/// `filler_per_topic` purely-noise documents.
///
/// BM25 retrieves the planted documents for topic-term queries by
/// construction; a random scorer has no such advantage.
pub fn synthetic_corpus(
    n_topics: usize,
    rel_per_topic: usize,
    filler_per_topic: usize,
    seed: u64,
) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    let mut topics = Vec::new();
    let mut qrels = QrelsTable::new();

    let noise_text = |rng: &mut ChaCha8Rng, n: usize| -> String {
        (0..n)
            .map(|_| NOISE[rng.random_range(0..NOISE.len())])
            .collect::<Vec<_>>()
            .join(" ")
    };

    for t in 0..n_topics {
        let topic_id = format!("t{t:03}");
        let term_a = format!("theme{t:03}a");
        let term_b = format!("theme{t:03}b");
        let term_c = format!("theme{t:03}c");
        topics.push(Topic {
            id: topic_id.clone(),
            title: tokenize(&format!("{term_a} {term_b} {term_c}")),
            description: tokenize(&format!(
                "find material about {term_a} and {term_b} covering {term_c}"
            )),
            narrative: vec![],
        });

        for r in 0..rel_per_topic {
            let id = format!("{topic_id}rel{r}");
            let grade = 1 + (r % 3) as i32;
            // Higher-graded docs repeat the topic vocabulary more.
            let mut body = String::new();
            for _ in 0..=grade {
                body.push_str(&format!("{term_a} {term_b} "));
            }
            body.push_str(&term_c);
            body.push(' ');
            body.push_str(&noise_text(&mut rng, 6));
            docs.push(Document::new(&id, tokenize(&term_a), tokenize(&body)));
            qrels.insert(&topic_id, &id, grade);
        }
        for f in 0..filler_per_topic {
            let id = format!("{topic_id}fill{f}");
            let body = noise_text(&mut rng, 12);
            docs.push(Document::new(&id, vec![], tokenize(&body)));
            qrels.insert(&topic_id, &id, 0);
        }
    }
    SyntheticCorpus { docs, topics, qrels }
}
