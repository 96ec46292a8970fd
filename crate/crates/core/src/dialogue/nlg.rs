use std::collections::BTreeMap;

use rand::Rng;

use super::acts::{DialogueAct, Intent};
use super::DialogueError;

/// Template store: intent name -> list of patterns with `{slot}`
/// placeholders.
///
/// For valued acts a pattern's placeholders must exactly match the act's
/// slot names; for valueless acts (requests) the meta-placeholder `{slot}`
/// receives the comma-joined slot names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateSet {
    templates: BTreeMap<String, Vec<String>>,
}

impl TemplateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, intent: impl Into<String>, pattern: impl Into<String>) {
        self.templates
            .entry(intent.into().to_ascii_uppercase())
            .or_default()
            .push(pattern.into());
    }

    /// Parse the template file format: one `INTENT: pattern` per line,
    /// `#` comments allowed. Repeated intents accumulate variants.
    pub fn parse(text: &str) -> Result<Self, DialogueError> {
        let mut set = Self::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (intent, pattern) = line.split_once(':').ok_or_else(|| {
                DialogueError::MissingTemplate(format!("template line missing `:`: {line}"))
            })?;
            set.insert(intent.trim(), pattern.trim());
        }
        Ok(set)
    }

    /// A minimal built-in template set covering the core intents.
    pub fn builtin() -> Self {
        let mut set = Self::new();
        set.insert("INFORM", "i am looking for {slots}");
        set.insert("REQUEST", "what is the {slot}?");
        set.insert("NEGATE", "no, not {slots}");
        set.insert("DENY", "no, i said {slots}");
        set.insert("AFFIRM", "yes");
        set.insert("GREETING", "hello");
        set.insert("BYE", "thank you, goodbye");
        set.insert("NOMATCH", "i could not find anything matching");
        set
    }

    pub fn variants(&self, intent: &Intent) -> Option<&[String]> {
        self.templates.get(intent.as_str()).map(Vec::as_slice)
    }
}

/// Realize a dialogue act as text.
///
/// Among the intent's template variants, those whose placeholders match the
/// act are candidates; one is chosen by the RNG (deterministic under a fixed
/// stream) and its placeholders substituted. No matching variant is an
/// error naming the intent.
pub fn realize<R: Rng + ?Sized>(
    act: &DialogueAct,
    templates: &TemplateSet,
    rng: &mut R,
) -> Result<String, DialogueError> {
    let variants = templates
        .variants(&act.intent)
        .ok_or_else(|| DialogueError::MissingTemplate(act.intent.to_string()))?;
    let matching: Vec<&String> =
        variants.iter().filter(|pattern| substitute(pattern, act).is_some()).collect();
    if matching.is_empty() {
        return Err(DialogueError::MissingTemplate(act.intent.to_string()));
    }
    let choice = if matching.len() == 1 { 0 } else { rng.random_range(0..matching.len()) };
    Ok(substitute(matching[choice], act).expect("filtered to matching patterns"))
}

// Substitute placeholders; None when the pattern does not fit the act.
fn substitute(pattern: &str, act: &DialogueAct) -> Option<String> {
    let placeholders = extract_placeholders(pattern);
    let valued: BTreeMap<&str, &str> = act
        .slots
        .iter()
        .filter_map(|sv| sv.value.as_deref().map(|v| (sv.slot.as_str(), v)))
        .collect();

    let mut out = pattern.to_string();
    for ph in &placeholders {
        let replacement = match ph.as_str() {
            "slot" => {
                let names: Vec<&str> = act.slots.iter().map(|sv| sv.slot.as_str()).collect();
                if names.is_empty() {
                    return None;
                }
                names.join(", ")
            }
            "slots" => {
                if act.slots.is_empty() {
                    return None;
                }
                act.slots
                    .iter()
                    .map(|sv| match &sv.value {
                        Some(v) => format!("{} {}", sv.slot, v),
                        None => sv.slot.clone(),
                    })
                    .collect::<Vec<_>>()
                    .join(", ")
            }
            name => valued.get(name)?.to_string(),
        };
        out = out.replace(&format!("{{{ph}}}"), &replacement);
    }
    // A pattern without placeholders only fits slot-free acts; otherwise
    // every valued slot must be consumed by a named placeholder.
    if placeholders.is_empty() && !act.slots.is_empty() {
        return None;
    }
    let uses_named = placeholders.iter().any(|p| p != "slot" && p != "slots");
    if uses_named {
        for slot in valued.keys() {
            if !placeholders.iter().any(|p| p == slot) {
                return None;
            }
        }
    }
    Some(out)
}

fn extract_placeholders(pattern: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = pattern;
    while let Some(start) = rest.find('{') {
        let Some(end) = rest[start..].find('}') else { break };
        out.push(rest[start + 1..start + end].to_string());
        rest = &rest[start + end + 1..];
    }
    out
}
