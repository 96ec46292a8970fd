use super::SessionError;
use crate::corpus::QrelsTable;
use crate::{Grade, Query, Scalar};

/// One logged interaction event.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    /// Seconds from session start, inclusive of this event's own cost.
    pub time: Scalar,
    pub kind: EventKind,
}

/// Everything a simulated searcher can do, in log form.
#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    SessionStart { topic: String },
    QueryIssued { query: Query },
    SerpShown { results: usize },
    SerpSkipped,
    SnippetExamined { rank: usize, grade: Grade },
    Click { doc: String },
    DocJudged { doc: String, rel: bool, grade: Grade },
    StopQuery { reason: String },
    SessionEnd { reason: String },
}

impl EventKind {
    fn name(&self) -> &'static str {
        match self {
            EventKind::SessionStart { .. } => "SessionStart",
            EventKind::QueryIssued { .. } => "QueryIssued",
            EventKind::SerpShown { .. } => "SerpShown",
            EventKind::SerpSkipped => "SerpSkipped",
            EventKind::SnippetExamined { .. } => "SnippetExamined",
            EventKind::Click { .. } => "Click",
            EventKind::DocJudged { .. } => "DocJudged",
            EventKind::StopQuery { .. } => "StopQuery",
            EventKind::SessionEnd { .. } => "SessionEnd",
        }
    }
}

/// Append-only, timestamped record of one session. The sole input to
/// log-based scoring.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteractionLog {
    events: Vec<Event>,
}

impl InteractionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: Scalar, kind: EventKind) {
        self.events.push(Event { time, kind });
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Topic id carried by the opening event, if well-formed so far.
    pub fn topic(&self) -> Option<&str> {
        match self.events.first() {
            Some(Event { kind: EventKind::SessionStart { topic }, .. }) => Some(topic),
            _ => None,
        }
    }

    /// Total session cost in seconds: the last event's time offset.
    pub fn total_cost(&self) -> Scalar {
        self.events.last().map(|e| e.time).unwrap_or(0.0)
    }

    /// Check the structural invariants; returns the first violation.
    pub fn validate(&self) -> Result<(), SessionError> {
        let fail = |index, reason: &str| {
            Err(SessionError::MalformedLog { index, reason: reason.to_string() })
        };
        if self.events.is_empty() {
            return fail(0, "log is empty");
        }
        if !matches!(self.events[0].kind, EventKind::SessionStart { .. }) {
            return fail(0, "log must start with SessionStart");
        }
        if !matches!(self.events.last().unwrap().kind, EventKind::SessionEnd { .. }) {
            return fail(self.events.len() - 1, "log must end with SessionEnd");
        }
        let mut prev_time = 0.0;
        for (i, event) in self.events.iter().enumerate() {
            if event.time < prev_time {
                return fail(i, "time offsets must be non-decreasing");
            }
            prev_time = event.time;
            if i > 0 && matches!(event.kind, EventKind::SessionStart { .. }) {
                return fail(i, "SessionStart can only open the log");
            }
            if i + 1 < self.events.len()
                && matches!(event.kind, EventKind::SessionEnd { .. })
            {
                return fail(i, "SessionEnd can only close the log");
            }
            if matches!(event.kind, EventKind::Click { .. }) {
                // A click belongs to the snippet examined right before it.
                let examined_just_before = i > 0
                    && matches!(self.events[i - 1].kind, EventKind::SnippetExamined { .. });
                if !examined_just_before {
                    return fail(i, "Click without the snippet examination preceding it");
                }
            }
        }
        Ok(())
    }

    /// Serialize as line-delimited records: `time \t kind \t payload`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!("{:.3}\t{}\t{}\n", e.time, e.kind.name(), payload(&e.kind)));
        }
        out
    }

    /// Parse the line format written by [`InteractionLog::to_text`].
    pub fn from_text(text: &str) -> Result<Self, SessionError> {
        let mut log = InteractionLog::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.splitn(3, '\t');
            let time: Scalar = cols
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| SessionError::LogParse {
                    line: line_no,
                    reason: "bad time offset".into(),
                })?;
            let kind_name = cols.next().ok_or_else(|| SessionError::LogParse {
                line: line_no,
                reason: "missing kind".into(),
            })?;
            let payload = cols.next().unwrap_or("{}");
            let kind = parse_kind(kind_name, payload).map_err(|reason| {
                SessionError::LogParse { line: line_no, reason }
            })?;
            log.push(time, kind);
        }
        Ok(log)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn payload(kind: &EventKind) -> String {
    match kind {
        EventKind::SessionStart { topic } => format!("{{\"topic\":\"{}\"}}", escape(topic)),
        EventKind::QueryIssued { query } => {
            format!("{{\"q\":\"{}\"}}", escape(&query.join(" ")))
        }
        EventKind::SerpShown { results } => format!("{{\"results\":{results}}}"),
        EventKind::SerpSkipped => "{}".to_string(),
        EventKind::SnippetExamined { rank, grade } => {
            format!("{{\"rank\":{rank},\"grade\":{grade}}}")
        }
        EventKind::Click { doc } => format!("{{\"doc\":\"{}\"}}", escape(doc)),
        EventKind::DocJudged { doc, rel, grade } => {
            format!("{{\"doc\":\"{}\",\"rel\":{rel},\"grade\":{grade}}}", escape(doc))
        }
        EventKind::StopQuery { reason } => format!("{{\"reason\":\"{}\"}}", escape(reason)),
        EventKind::SessionEnd { reason } => format!("{{\"reason\":\"{}\"}}", escape(reason)),
    }
}

fn parse_kind(name: &str, payload: &str) -> Result<EventKind, String> {
    let str_field = |key: &str| -> Result<String, String> {
        let pat = format!("\"{key}\":\"");
        let start = payload.find(&pat).ok_or(format!("missing field {key}"))? + pat.len();
        let rest = &payload[start..];
        let mut end = 0;
        let bytes = rest.as_bytes();
        while end < bytes.len() {
            if bytes[end] == b'\\' {
                end += 2;
                continue;
            }
            if bytes[end] == b'"' {
                break;
            }
            end += 1;
        }
        Ok(unescape(&rest[..end.min(rest.len())]))
    };
    let num_field = |key: &str| -> Result<i64, String> {
        let pat = format!("\"{key}\":");
        let start = payload.find(&pat).ok_or(format!("missing field {key}"))? + pat.len();
        let rest: String = payload[start..]
            .chars()
            .take_while(|c| c.is_ascii_digit() || *c == '-')
            .collect();
        rest.parse().map_err(|_| format!("bad number for {key}"))
    };
    match name {
        "SessionStart" => Ok(EventKind::SessionStart { topic: str_field("topic")? }),
        "QueryIssued" => {
            let q = str_field("q")?;
            let query = if q.is_empty() {
                Vec::new()
            } else {
                q.split(' ').map(String::from).collect()
            };
            Ok(EventKind::QueryIssued { query })
        }
        "SerpShown" => Ok(EventKind::SerpShown { results: num_field("results")? as usize }),
        "SerpSkipped" => Ok(EventKind::SerpSkipped),
        "SnippetExamined" => Ok(EventKind::SnippetExamined {
            rank: num_field("rank")? as usize,
            grade: num_field("grade")? as Grade,
        }),
        "Click" => Ok(EventKind::Click { doc: str_field("doc")? }),
        "DocJudged" => Ok(EventKind::DocJudged {
            doc: str_field("doc")?,
            rel: payload.contains("\"rel\":true"),
            grade: num_field("grade")? as Grade,
        }),
        "StopQuery" => Ok(EventKind::StopQuery { reason: str_field("reason")? }),
        "SessionEnd" => Ok(EventKind::SessionEnd { reason: str_field("reason")? }),
        other => Err(format!("unknown event kind `{other}`")),
    }
}

/// Aggregates of one session log.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionSummary {
    pub queries: usize,
    pub snippets_examined: usize,
    pub clicks: usize,
    /// Distinct docs the user judged relevant that are relevant in the
    /// ground truth.
    pub relevant_found: usize,
    /// Cumulative ground-truth gain after each distinct judged-relevant doc.
    pub gain_trace: Vec<Scalar>,
    pub total_cost: Scalar,
    /// Clicks per query, in query order.
    pub clicks_per_query: Vec<usize>,
    /// Query lengths in tokens, in query order.
    pub query_lengths: Vec<usize>,
}

/// Summarize a well-formed log against the ground truth.
pub fn log_summary(
    log: &InteractionLog,
    qrels: &QrelsTable,
) -> Result<SessionSummary, SessionError> {
    log.validate()?;
    let topic = log.topic().unwrap_or_default().to_string();
    let mut summary = SessionSummary {
        queries: 0,
        snippets_examined: 0,
        clicks: 0,
        relevant_found: 0,
        gain_trace: Vec::new(),
        total_cost: log.total_cost(),
        clicks_per_query: Vec::new(),
        query_lengths: Vec::new(),
    };
    let mut gain = 0.0;
    let mut judged_rel = std::collections::BTreeSet::new();
    for event in log.events() {
        match &event.kind {
            EventKind::QueryIssued { query } => {
                summary.queries += 1;
                summary.clicks_per_query.push(0);
                summary.query_lengths.push(query.len());
            }
            EventKind::SnippetExamined { .. } => summary.snippets_examined += 1,
            EventKind::Click { .. } => {
                summary.clicks += 1;
                if let Some(last) = summary.clicks_per_query.last_mut() {
                    *last += 1;
                }
            }
            // Each document counts once, however often it is re-found.
            EventKind::DocJudged { doc, rel: true, .. }
                if judged_rel.insert(doc.clone()) =>
            {
                let g = qrels.grade(&topic, doc);
                if g >= 1 {
                    summary.relevant_found += 1;
                }
                gain += g as Scalar;
                summary.gain_trace.push(gain);
            }
            _ => {}
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_log() -> InteractionLog {
        let mut log = InteractionLog::new();
        log.push(7.8, EventKind::SessionStart { topic: "303".into() });
        log.push(14.8, EventKind::QueryIssued { query: vec!["hubble".into(), "mirror".into()] });
        log.push(16.8, EventKind::SerpShown { results: 2 });
        log.push(18.8, EventKind::SnippetExamined { rank: 1, grade: 2 });
        log.push(18.8, EventKind::Click { doc: "d1".into() });
        log.push(28.4, EventKind::DocJudged { doc: "d1".into(), rel: true, grade: 2 });
        log.push(30.4, EventKind::SnippetExamined { rank: 2, grade: 0 });
        log.push(30.4, EventKind::StopQuery { reason: "end-of-results".into() });
        log.push(30.4, EventKind::SessionEnd { reason: "max-queries".into() });
        log
    }

    #[test]
    fn round_trips_through_text() {
        let log = sample_log();
        let parsed = InteractionLog::from_text(&log.to_text()).unwrap();
        assert_eq!(log, parsed);
    }

    #[test]
    fn validates_clean_logs() {
        assert!(sample_log().validate().is_ok());
    }

    #[test]
    fn rejects_click_without_examination() {
        let mut log = InteractionLog::new();
        log.push(0.0, EventKind::SessionStart { topic: "1".into() });
        log.push(1.0, EventKind::Click { doc: "d1".into() });
        log.push(2.0, EventKind::SessionEnd { reason: "budget".into() });
        assert!(matches!(log.validate(), Err(SessionError::MalformedLog { index: 1, .. })));
    }

    #[test]
    fn rejects_time_going_backwards() {
        let mut log = InteractionLog::new();
        log.push(5.0, EventKind::SessionStart { topic: "1".into() });
        log.push(1.0, EventKind::SessionEnd { reason: "budget".into() });
        assert!(matches!(log.validate(), Err(SessionError::MalformedLog { index: 1, .. })));
    }

    #[test]
    fn summary_counts_match_fixture() {
        let mut qrels = QrelsTable::new();
        qrels.insert("303", "d1", 2);
        let summary = log_summary(&sample_log(), &qrels).unwrap();
        assert_eq!(summary.queries, 1);
        assert_eq!(summary.snippets_examined, 2);
        assert_eq!(summary.clicks, 1);
        assert_eq!(summary.relevant_found, 1);
        assert_eq!(summary.gain_trace, vec![2.0]);
        assert_eq!(summary.total_cost, 30.4);
        assert_eq!(summary.clicks_per_query, vec![1]);
        assert_eq!(summary.query_lengths, vec![2]);
    }

    #[test]
    fn empty_session_summary_is_all_zero() {
        let mut log = InteractionLog::new();
        log.push(0.0, EventKind::SessionStart { topic: "1".into() });
        log.push(0.0, EventKind::SessionEnd { reason: "budget".into() });
        let summary = log_summary(&log, &QrelsTable::new()).unwrap();
        assert_eq!(summary.queries, 0);
        assert_eq!(summary.snippets_examined, 0);
        assert_eq!(summary.clicks, 0);
        assert_eq!(summary.relevant_found, 0);
        assert!(summary.gain_trace.is_empty());
        assert_eq!(summary.total_cost, 0.0);
    }

    #[test]
    fn gain_trace_is_non_decreasing() {
        let mut qrels = QrelsTable::new();
        qrels.insert("303", "d1", 2);
        let summary = log_summary(&sample_log(), &qrels).unwrap();
        for pair in summary.gain_trace.windows(2) {
            assert!(pair[1] >= pair[0]);
        }
    }
}
