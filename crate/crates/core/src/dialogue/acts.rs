use std::fmt;

use super::DialogueError;

/// Dialogue intent; the fixed set plus domain extensions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Intent {
    Inform,
    Request,
    Negate,
    Deny,
    Affirm,
    Bye,
    Greeting,
    Custom(String),
}

impl Intent {
    pub fn as_str(&self) -> &str {
        match self {
            Intent::Inform => "INFORM",
            Intent::Request => "REQUEST",
            Intent::Negate => "NEGATE",
            Intent::Deny => "DENY",
            Intent::Affirm => "AFFIRM",
            Intent::Bye => "BYE",
            Intent::Greeting => "GREETING",
            Intent::Custom(name) => name,
        }
    }

    pub fn parse(name: &str) -> Intent {
        match name.to_ascii_uppercase().as_str() {
            "INFORM" => Intent::Inform,
            "REQUEST" => Intent::Request,
            "NEGATE" => Intent::Negate,
            "DENY" => Intent::Deny,
            "AFFIRM" => Intent::Affirm,
            "BYE" => Intent::Bye,
            "GREETING" => Intent::Greeting,
            other => Intent::Custom(other.to_string()),
        }
    }
}

impl fmt::Display for Intent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One slot, optionally with a value (REQUEST slots carry none).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotValue {
    pub slot: String,
    pub value: Option<String>,
}

impl SlotValue {
    pub fn valued(slot: impl Into<String>, value: impl Into<String>) -> Self {
        Self { slot: slot.into(), value: Some(value.into()) }
    }

    pub fn unfilled(slot: impl Into<String>) -> Self {
        Self { slot: slot.into(), value: None }
    }
}

/// A dialogue act: an intent with its slot-value list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueAct {
    pub intent: Intent,
    pub slots: Vec<SlotValue>,
}

impl DialogueAct {
    /// Construct and check the act invariants: `BYE` carries no slots,
    /// `INFORM` and `REQUEST` carry at least one.
    pub fn new(intent: Intent, slots: Vec<SlotValue>) -> Result<Self, DialogueError> {
        match intent {
            Intent::Bye if !slots.is_empty() => {
                Err(DialogueError::InvalidAct("BYE must not carry slots".into()))
            }
            Intent::Inform | Intent::Request if slots.is_empty() => Err(
                DialogueError::InvalidAct(format!("{intent} needs at least one slot")),
            ),
            _ => Ok(Self { intent, slots }),
        }
    }

    pub fn bye() -> Self {
        Self { intent: Intent::Bye, slots: vec![] }
    }

    pub fn inform(slot: impl Into<String>, value: impl Into<String>) -> Self {
        Self { intent: Intent::Inform, slots: vec![SlotValue::valued(slot, value)] }
    }

    pub fn request(slot: impl Into<String>) -> Self {
        Self { intent: Intent::Request, slots: vec![SlotValue::unfilled(slot)] }
    }

    /// Canonical rendering, e.g. `INFORM(type=bar,drinks=beer)`.
    pub fn canonical(&self) -> String {
        if self.slots.is_empty() {
            return self.intent.to_string();
        }
        let inner: Vec<String> = self
            .slots
            .iter()
            .map(|sv| match &sv.value {
                Some(v) => format!("{}={}", sv.slot, v),
                None => sv.slot.clone(),
            })
            .collect();
        format!("{}({})", self.intent, inner.join(","))
    }
}

impl fmt::Display for DialogueAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bye_must_be_bare() {
        assert!(DialogueAct::new(Intent::Bye, vec![SlotValue::unfilled("x")]).is_err());
        assert!(DialogueAct::new(Intent::Bye, vec![]).is_ok());
    }

    #[test]
    fn inform_needs_slots() {
        assert!(DialogueAct::new(Intent::Inform, vec![]).is_err());
        assert!(DialogueAct::new(Intent::Request, vec![]).is_err());
        assert!(DialogueAct::new(Intent::Affirm, vec![]).is_ok());
    }

    #[test]
    fn canonical_rendering() {
        let act = DialogueAct::new(
            Intent::Inform,
            vec![SlotValue::valued("type", "bar"), SlotValue::valued("drinks", "beer")],
        )
        .unwrap();
        assert_eq!(act.canonical(), "INFORM(type=bar,drinks=beer)");
        assert_eq!(DialogueAct::request("phone").canonical(), "REQUEST(phone)");
        assert_eq!(DialogueAct::bye().canonical(), "BYE");
    }

    #[test]
    fn intent_parse_round_trip() {
        for name in ["INFORM", "REQUEST", "BYE", "NOMATCH"] {
            assert_eq!(Intent::parse(name).as_str(), name);
        }
    }
}
