use std::collections::BTreeMap;

use rand::Rng;

use super::DialogueError;
use crate::Scalar;

/// Consistent preference store: (slot, value) -> preference in [-1, 1].
///
/// Preferences for unseen pairs are generated on first request (uniform in
/// {-1, +1}) and persisted, so repeated questions get the same answer within
/// a dialogue.
#[derive(Debug, Clone, Default)]
pub struct PreferenceStore {
    prefs: BTreeMap<(String, String), Scalar>,
}

impl PreferenceStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seed an explicit preference; overwrites any existing triple for the
    /// same (slot, value).
    pub fn set(
        &mut self,
        slot: impl Into<String>,
        value: impl Into<String>,
        pref: Scalar,
    ) -> Result<(), DialogueError> {
        if !(-1.0..=1.0).contains(&pref) {
            return Err(DialogueError::PrefRange(pref));
        }
        self.prefs.insert((slot.into(), value.into()), pref);
        Ok(())
    }

    pub fn get(&self, slot: &str, value: &str) -> Option<Scalar> {
        self.prefs.get(&(slot.to_string(), value.to_string())).copied()
    }

    /// Preference for a pair, generating and saving one if unseen.
    pub fn get_or_generate<R: Rng + ?Sized>(
        &mut self,
        slot: &str,
        value: &str,
        rng: &mut R,
    ) -> Scalar {
        if let Some(p) = self.get(slot, value) {
            return p;
        }
        let p = if rng.random::<bool>() { 1.0 } else { -1.0 };
        self.prefs.insert((slot.to_string(), value.to_string()), p);
        p
    }

    /// The most preferred value of a slot among `domain`, generating
    /// preferences as needed. Ties keep domain order.
    pub fn preferred_value<R: Rng + ?Sized>(
        &mut self,
        slot: &str,
        domain: &[String],
        rng: &mut R,
    ) -> Option<String> {
        let mut best: Option<(Scalar, &String)> = None;
        for value in domain {
            let p = self.get_or_generate(slot, value, rng);
            if best.map(|(bp, _)| p > bp).unwrap_or(true) {
                best = Some((p, value));
            }
        }
        best.map(|(_, v)| v.clone())
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }
}
