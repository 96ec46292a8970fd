use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::acts::Intent;
use super::DialogueError;

/// Conformance layer for dialogue flows: which user intents exist, how they
/// may follow each other, and which system intents properly answer each
/// user intent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionModel {
    start: Intent,
    user_intents: BTreeSet<Intent>,
    transitions: BTreeMap<Intent, BTreeSet<Intent>>,
    expected: BTreeMap<Intent, BTreeSet<Intent>>,
}

impl InteractionModel {
    /// Build and verify that every user intent is reachable from the start
    /// intent through the transition relation.
    pub fn new(
        start: Intent,
        transitions: BTreeMap<Intent, BTreeSet<Intent>>,
        expected: BTreeMap<Intent, BTreeSet<Intent>>,
    ) -> Result<Self, DialogueError> {
        let mut user_intents: BTreeSet<Intent> = transitions.keys().cloned().collect();
        for targets in transitions.values() {
            user_intents.extend(targets.iter().cloned());
        }
        user_intents.insert(start.clone());

        let mut reached: BTreeSet<Intent> = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(intent) = queue.pop_front() {
            if !reached.insert(intent.clone()) {
                continue;
            }
            if let Some(next) = transitions.get(&intent) {
                queue.extend(next.iter().cloned());
            }
        }
        for intent in &user_intents {
            if !reached.contains(intent) {
                return Err(DialogueError::UnreachableIntent(intent.to_string()));
            }
        }
        Ok(Self { start, user_intents, transitions, expected })
    }

    /// A permissive model over the given intents: any transition, any system
    /// response expected.
    pub fn identity(intents: impl IntoIterator<Item = Intent>) -> Self {
        let set: BTreeSet<Intent> = intents.into_iter().collect();
        let start = set.iter().next().cloned().unwrap_or(Intent::Greeting);
        Self {
            start,
            user_intents: set,
            transitions: BTreeMap::new(),
            expected: BTreeMap::new(),
        }
    }

    pub fn start(&self) -> &Intent {
        &self.start
    }

    pub fn allows_transition(&self, from: &Intent, to: &Intent) -> bool {
        match self.transitions.get(from) {
            Some(set) => set.contains(to),
            None => true,
        }
    }

    /// Is `system` an expected response to `user`? Unknown intents error.
    pub fn check_expected(
        &self,
        user: &Intent,
        system: &Intent,
    ) -> Result<bool, DialogueError> {
        if !self.user_intents.contains(user) {
            return Err(DialogueError::UnknownIntent(user.to_string()));
        }
        Ok(match self.expected.get(user) {
            Some(set) => set.contains(system),
            // No expectation recorded: everything is acceptable.
            None => true,
        })
    }
}

/// Free-function form of [`InteractionModel::check_expected`].
pub fn check_expected(
    model: &InteractionModel,
    last_user: &Intent,
    system: &Intent,
) -> Result<bool, DialogueError> {
    model.check_expected(last_user, system)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(intents: &[Intent]) -> BTreeSet<Intent> {
        intents.iter().cloned().collect()
    }

    fn model() -> InteractionModel {
        let transitions = BTreeMap::from([
            (Intent::Greeting, set(&[Intent::Inform, Intent::Request])),
            (Intent::Inform, set(&[Intent::Request, Intent::Bye])),
            (Intent::Request, set(&[Intent::Request, Intent::Bye])),
        ]);
        let expected = BTreeMap::from([
            (Intent::Request, set(&[Intent::Inform])),
            (Intent::Inform, set(&[Intent::Affirm, Intent::Inform])),
        ]);
        InteractionModel::new(Intent::Greeting, transitions, expected).unwrap()
    }

    #[test]
    fn request_expects_inform() {
        let m = model();
        assert!(m.check_expected(&Intent::Request, &Intent::Inform).unwrap());
        assert!(!m.check_expected(&Intent::Request, &Intent::Greeting).unwrap());
    }

    #[test]
    fn identity_model_accepts_everything() {
        let m = InteractionModel::identity([Intent::Inform, Intent::Request]);
        assert!(m.check_expected(&Intent::Inform, &Intent::Greeting).unwrap());
    }

    #[test]
    fn unknown_intent_is_an_error() {
        let m = model();
        let err = m
            .check_expected(&Intent::Custom("ELABORATE".into()), &Intent::Inform)
            .unwrap_err();
        assert_eq!(err, DialogueError::UnknownIntent("ELABORATE".into()));
    }

    #[test]
    fn unreachable_intents_are_rejected() {
        let transitions = BTreeMap::from([
            (Intent::Greeting, set(&[Intent::Inform])),
            // BYE appears as a source but nothing reaches it.
            (Intent::Bye, set(&[Intent::Bye])),
        ]);
        let err =
            InteractionModel::new(Intent::Greeting, transitions, BTreeMap::new()).unwrap_err();
        assert_eq!(err, DialogueError::UnreachableIntent("BYE".into()));
    }

    #[test]
    fn transitions_default_open() {
        let m = model();
        assert!(m.allows_transition(&Intent::Greeting, &Intent::Inform));
        assert!(!m.allows_transition(&Intent::Greeting, &Intent::Bye));
        // Intents without a transition row are unconstrained.
        assert!(m.allows_transition(&Intent::Affirm, &Intent::Bye));
    }
}
