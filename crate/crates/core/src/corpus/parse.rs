use super::tokenize::tokenize;
use super::types::{Document, QrelsTable, Topic};
use super::CorpusError;

/// Parse TREC-style topic records.
///
/// A record starts at `<num>` and carries `<title>`, `<desc>`, and `<narr>`
/// fields; `<top>`/`</top>` wrappers are tolerated. Conventional field labels
/// ("Number:", "Description:", "Narrative:") are stripped. A record without
/// `<num>` or `<title>` is a parse error naming the byte offset of the record.
pub fn parse_trec_topics(text: &str) -> Result<Vec<Topic>, CorpusError> {
    let mut topics = Vec::new();
    let mut record: Option<RawRecord> = None;

    let mut offset = 0usize;
    'line: for line in text.split_inclusive('\n') {
        let line_offset = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.eq_ignore_ascii_case("<top>") || trimmed.eq_ignore_ascii_case("</top>") {
            if trimmed.eq_ignore_ascii_case("</top>") {
                if let Some(rec) = record.take() {
                    topics.push(rec.finish()?);
                }
            }
            continue;
        }
        if let Some(rest) = strip_marker(trimmed, "<num>") {
            if let Some(rec) = record.take() {
                topics.push(rec.finish()?);
            }
            record = Some(RawRecord::new(line_offset, strip_label(rest, "Number:")));
            continue;
        }
        for (marker, label, field) in [
            ("<title>", "Topic:", Field::Title),
            ("<desc>", "Description:", Field::Desc),
            ("<narr>", "Narrative:", Field::Narr),
        ] {
            if let Some(rest) = strip_marker(trimmed, marker) {
                let rec = record.as_mut().ok_or(CorpusError::TopicParse {
                    offset: line_offset,
                    field: "num",
                })?;
                rec.open(field, strip_label(rest, label));
                continue 'line;
            }
        }
        if let Some(rec) = record.as_mut() {
            rec.continuation(trimmed);
        }
    }
    if let Some(rec) = record.take() {
        topics.push(rec.finish()?);
    }
    Ok(topics)
}

/// Render topics back into the TREC field format accepted by
/// [`parse_trec_topics`].
pub fn serialize_topics(topics: &[Topic]) -> String {
    let mut out = String::new();
    for t in topics {
        out.push_str("<top>\n");
        out.push_str(&format!("<num> Number: {}\n", t.id));
        out.push_str(&format!("<title> {}\n", t.title.join(" ")));
        out.push_str(&format!("<desc> Description:\n{}\n", t.description.join(" ")));
        out.push_str(&format!("<narr> Narrative:\n{}\n", t.narrative.join(" ")));
        out.push_str("</top>\n");
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Title,
    Desc,
    Narr,
}

struct RawRecord {
    offset: usize,
    id: String,
    title: String,
    desc: String,
    narr: String,
    current: Option<Field>,
}

impl RawRecord {
    fn new(offset: usize, id_text: &str) -> Self {
        Self {
            offset,
            id: id_text.trim().to_string(),
            title: String::new(),
            desc: String::new(),
            narr: String::new(),
            current: None,
        }
    }

    fn open(&mut self, field: Field, text: &str) {
        self.current = Some(field);
        self.append(field, text);
    }

    fn continuation(&mut self, text: &str) {
        if self.id.is_empty() && self.current.is_none() {
            // Text directly after <num> continues the id line.
            self.id = text.trim().to_string();
            return;
        }
        if let Some(field) = self.current {
            self.append(field, text);
        }
    }

    fn append(&mut self, field: Field, text: &str) {
        let buf = match field {
            Field::Title => &mut self.title,
            Field::Desc => &mut self.desc,
            Field::Narr => &mut self.narr,
        };
        if !text.is_empty() {
            if !buf.is_empty() {
                buf.push(' ');
            }
            buf.push_str(text);
        }
    }

    fn finish(self) -> Result<Topic, CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::TopicParse { offset: self.offset, field: "num" });
        }
        let title = tokenize(&self.title);
        if title.is_empty() {
            return Err(CorpusError::TopicParse { offset: self.offset, field: "title" });
        }
        Ok(Topic {
            id: self.id,
            title,
            description: tokenize(&self.desc),
            narrative: tokenize(&self.narr),
        })
    }
}

fn strip_marker<'a>(line: &'a str, marker: &str) -> Option<&'a str> {
    let lower = line.to_ascii_lowercase();
    lower.starts_with(marker).then(|| line[marker.len()..].trim())
}

fn strip_label<'a>(text: &'a str, label: &str) -> &'a str {
    let lower = text.to_ascii_lowercase();
    if lower.starts_with(&label.to_ascii_lowercase()) {
        text[label.len()..].trim()
    } else {
        text
    }
}

/// Parse whitespace-separated qrels lines: `topic iteration doc grade`.
///
/// Grades must be integers in 0..=3; duplicate (topic, doc) lines overwrite.
pub fn parse_qrels(text: &str) -> Result<QrelsTable, CorpusError> {
    let mut table = QrelsTable::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(CorpusError::QrelsParse {
                line: line_no,
                reason: format!("expected 4 columns, got {}", cols.len()),
            });
        }
        let grade: i64 = cols[3].parse().map_err(|_| CorpusError::QrelsParse {
            line: line_no,
            reason: format!("non-integer grade `{}`", cols[3]),
        })?;
        if !(0..=3).contains(&grade) {
            return Err(CorpusError::QrelsParse {
                line: line_no,
                reason: format!("grade {grade} outside 0..3"),
            });
        }
        table.insert(cols[0], cols[2], grade as i32);
    }
    Ok(table)
}

/// Render a qrels table back into the whitespace format, one line per pair.
pub fn serialize_qrels(table: &QrelsTable) -> String {
    let mut out = String::new();
    for (topic, doc, grade) in table.iter() {
        out.push_str(&format!("{topic} 0 {doc} {grade}\n"));
    }
    out
}

/// Parse the one-document-per-line collection format: `docid \t title \t body`.
pub fn parse_documents(text: &str) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.splitn(3, '\t');
        let id = cols.next().unwrap_or("").trim();
        let title = cols.next().ok_or_else(|| CorpusError::DocumentParse {
            line: line_no,
            reason: "missing title column".into(),
        })?;
        let body = cols.next().ok_or_else(|| CorpusError::DocumentParse {
            line: line_no,
            reason: "missing body column".into(),
        })?;
        if id.is_empty() {
            return Err(CorpusError::DocumentParse {
                line: line_no,
                reason: "empty document id".into(),
            });
        }
        docs.push(Document::new(id, tokenize(title), tokenize(body)));
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HUBBLE: &str = "\
<top>
<num> Number: 303
<title> Hubble Telescope Achievements
<desc> Description:
Identify positive accomplishments of the Hubble telescope since it
was launched in 1991.
<narr> Narrative:
Documents are relevant that show the Hubble telescope has produced
new data.
</top>
";

    #[test]
    fn parses_the_hubble_record() {
        let topics = parse_trec_topics(HUBBLE).unwrap();
        assert_eq!(topics.len(), 1);
        let t = &topics[0];
        assert_eq!(t.id, "303");
        assert_eq!(t.title, vec!["hubble", "telescope", "achievements"]);
        assert!(t.description.starts_with(&["identify".into(), "positive".into()]));
        assert!(t.narrative.contains(&"relevant".to_string()));
    }

    #[test]
    fn empty_input_gives_empty_list() {
        assert!(parse_trec_topics("").unwrap().is_empty());
    }

    #[test]
    fn missing_title_is_an_error_with_offset() {
        let text = "<num> Number: 7\n<desc> Description: something\n";
        match parse_trec_topics(text) {
            Err(CorpusError::TopicParse { offset, field }) => {
                assert_eq!(offset, 0);
                assert_eq!(field, "title");
            }
            other => panic!("expected TopicParse error, got {other:?}"),
        }
    }

    #[test]
    fn title_without_num_is_an_error() {
        let text = "<title> orphan title\n";
        match parse_trec_topics(text) {
            Err(CorpusError::TopicParse { field, .. }) => assert_eq!(field, "num"),
            other => panic!("expected TopicParse error, got {other:?}"),
        }
    }

    #[test]
    fn topics_round_trip_through_serializer() {
        let two = format!(
            "{HUBBLE}<top>\n<num> Number: 304\n<title> Endangered Species Mammals\n\
             <desc> Description:\nCompile a list of mammals.\n<narr> Narrative:\nAny source.\n</top>\n"
        );
        let parsed = parse_trec_topics(&two).unwrap();
        let round = parse_trec_topics(&serialize_topics(&parsed)).unwrap();
        assert_eq!(parsed, round);
    }

    #[test]
    fn qrels_line_parses() {
        let q = parse_qrels("303 0 FT921-7107 2\n").unwrap();
        assert_eq!(q.grade("303", "FT921-7107"), 2);
    }

    #[test]
    fn qrels_duplicate_last_wins() {
        let q = parse_qrels("1 0 a 1\n1 0 b 2\n1 0 a 3\n").unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.grade("1", "a"), 3);
    }

    #[test]
    fn qrels_bad_grade_reports_line() {
        match parse_qrels("1 0 a 1\n1 0 b 9\n") {
            Err(CorpusError::QrelsParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected QrelsParse, got {other:?}"),
        }
        match parse_qrels("1 0 a x\n") {
            Err(CorpusError::QrelsParse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected QrelsParse, got {other:?}"),
        }
    }

    #[test]
    fn qrels_round_trip() {
        let q = parse_qrels("2 0 b 1\n1 0 a 3\n1 0 c 0\n").unwrap();
        let round = parse_qrels(&serialize_qrels(&q)).unwrap();
        assert_eq!(q, round);
    }

    #[test]
    fn documents_parse_tsv() {
        let docs = parse_documents("d1\tFirst Title\tbody text here\nd2\t\tonly body\n").unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].title, vec!["first", "title"]);
        assert_eq!(docs[1].title, Vec::<String>::new());
        assert_eq!(docs[1].body, vec!["only", "body"]);
    }
}
