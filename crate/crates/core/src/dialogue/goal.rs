use rand::Rng;

use super::prefs::PreferenceStore;
use super::DialogueError;

/// One slot of the domain ontology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologySlot {
    pub name: String,
    pub values: Vec<String>,
    /// Can the user impose it as a constraint?
    pub informable: bool,
    /// Can the user ask for its value?
    pub requestable: bool,
}

/// Domain ontology: the slots and value domains dialogues talk about.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    slots: Vec<OntologySlot>,
}

impl Ontology {
    pub fn new(slots: Vec<OntologySlot>) -> Self {
        Self { slots }
    }

    pub fn slots(&self) -> &[OntologySlot] {
        &self.slots
    }

    pub fn slot(&self, name: &str) -> Option<&OntologySlot> {
        self.slots.iter().find(|s| s.name == name)
    }

    /// Parse the ontology file format: one slot per line,
    /// `name: value1|value2|...` with optional trailing flags
    /// `[informable]` / `[requestable]` (both by default).
    pub fn parse(text: &str) -> Result<Self, DialogueError> {
        let mut slots = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, rest) = line.split_once(':').ok_or_else(|| {
                DialogueError::InvalidAct(format!("ontology line missing `:`: {line}"))
            })?;
            let mut informable = true;
            let mut requestable = true;
            let mut values_part = rest.trim();
            if values_part.contains('[') {
                informable = values_part.contains("[informable]");
                requestable = values_part.contains("[requestable]");
                values_part = values_part.split('[').next().unwrap_or("").trim();
            }
            let values: Vec<String> = values_part
                .split('|')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            slots.push(OntologySlot {
                name: name.trim().to_string(),
                values,
                informable,
                requestable,
            });
        }
        Ok(Self { slots })
    }
}

/// The user goal: constraints the user imposes and requests to be filled.
///
/// Constraint priority follows insertion order; the last constraint is the
/// lowest-priority one and gets relaxed first. A filled request never
/// becomes unfilled again.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Goal {
    constraints: Vec<(String, String)>,
    requests: Vec<(String, Option<String>)>,
}

impl Goal {
    pub fn new(
        constraints: Vec<(String, String)>,
        requests: Vec<String>,
    ) -> Result<Self, DialogueError> {
        for (slot, _) in &constraints {
            if requests.iter().any(|r| r == slot) {
                return Err(DialogueError::SlotOverlap(slot.clone()));
            }
        }
        Ok(Self {
            constraints,
            requests: requests.into_iter().map(|r| (r, None)).collect(),
        })
    }

    pub fn constraints(&self) -> &[(String, String)] {
        &self.constraints
    }

    pub fn requests(&self) -> &[(String, Option<String>)] {
        &self.requests
    }

    pub fn constraint_value(&self, slot: &str) -> Option<&str> {
        self.constraints
            .iter()
            .find(|(s, _)| s == slot)
            .map(|(_, v)| v.as_str())
    }

    pub fn is_request(&self, slot: &str) -> bool {
        self.requests.iter().any(|(s, _)| s == slot)
    }

    pub fn request_value(&self, slot: &str) -> Option<&str> {
        self.requests
            .iter()
            .find(|(s, _)| s == slot)
            .and_then(|(_, v)| v.as_deref())
    }

    /// Fill an open request; a value already present stays (monotonicity).
    /// Returns whether the fill happened.
    pub fn fill_request(&mut self, slot: &str, value: &str) -> bool {
        for (s, v) in &mut self.requests {
            if s == slot && v.is_none() {
                *v = Some(value.to_string());
                return true;
            }
        }
        false
    }

    pub fn all_requests_filled(&self) -> bool {
        self.requests.iter().all(|(_, v)| v.is_some())
    }

    /// Drop the lowest-priority (last) constraint; the explicit relaxation
    /// path for unachievable goals.
    pub fn relax_lowest(&mut self) -> Option<(String, String)> {
        self.constraints.pop()
    }
}

/// Sample a goal: `n_constraints` informable slots with values and
/// `n_requests` requestable slots, disjoint.
///
/// When a preference store is supplied, constraint values follow the user's
/// preferences (generated and persisted on first use).
pub fn sample_goal<R: Rng + ?Sized>(
    ontology: &Ontology,
    n_constraints: usize,
    n_requests: usize,
    mut prefs: Option<&mut PreferenceStore>,
    rng: &mut R,
) -> Result<Goal, DialogueError> {
    let informable: Vec<&OntologySlot> = ontology
        .slots()
        .iter()
        .filter(|s| s.informable && !s.values.is_empty())
        .collect();
    if informable.len() < n_constraints {
        return Err(DialogueError::InsufficientSlots {
            needed: n_constraints + n_requests,
            available: informable.len(),
        });
    }
    let chosen_c = sample_without_replacement(&informable, n_constraints, rng);
    let constraint_names: Vec<&str> = chosen_c.iter().map(|s| s.name.as_str()).collect();

    let requestable: Vec<&OntologySlot> = ontology
        .slots()
        .iter()
        .filter(|s| s.requestable && !constraint_names.contains(&s.name.as_str()))
        .collect();
    if requestable.len() < n_requests {
        return Err(DialogueError::InsufficientSlots {
            needed: n_constraints + n_requests,
            available: chosen_c.len() + requestable.len(),
        });
    }
    let chosen_r = sample_without_replacement(&requestable, n_requests, rng);

    let mut constraints = Vec::new();
    for slot in chosen_c {
        let value = match prefs.as_deref_mut() {
            Some(store) => store
                .preferred_value(&slot.name, &slot.values, rng)
                .expect("informable slots have values"),
            None => slot.values[rng.random_range(0..slot.values.len())].clone(),
        };
        constraints.push((slot.name.clone(), value));
    }
    let requests = chosen_r.into_iter().map(|s| s.name.clone()).collect();
    Goal::new(constraints, requests)
}

fn sample_without_replacement<'a, R: Rng + ?Sized>(
    pool: &[&'a OntologySlot],
    n: usize,
    rng: &mut R,
) -> Vec<&'a OntologySlot> {
    let mut pool: Vec<&OntologySlot> = pool.to_vec();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let i = rng.random_range(0..pool.len());
        out.push(pool.swap_remove(i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ontology() -> Ontology {
        Ontology::parse(
            "type: bar|restaurant|cafe\n\
             drinks: beer|wine\n\
             area: central|north|south\n\
             name: [requestable]\n\
             addr: [requestable]\n\
             phone: [requestable]\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_flags_and_values() {
        let ont = ontology();
        assert_eq!(ont.slot("type").unwrap().values.len(), 3);
        assert!(ont.slot("type").unwrap().informable);
        let name = ont.slot("name").unwrap();
        assert!(name.requestable);
        assert!(!name.informable);
        assert!(name.values.is_empty());
    }

    #[test]
    fn goal_rejects_overlap() {
        let err = Goal::new(
            vec![("type".into(), "bar".into())],
            vec!["type".into()],
        )
        .unwrap_err();
        assert_eq!(err, DialogueError::SlotOverlap("type".into()));
    }

    #[test]
    fn sampled_values_stay_in_domain() {
        let ont = ontology();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let goal = sample_goal(&ont, 3, 3, None, &mut rng).unwrap();
            assert_eq!(goal.constraints().len(), 3);
            assert_eq!(goal.requests().len(), 3);
            for (slot, value) in goal.constraints() {
                assert!(ont.slot(slot).unwrap().values.contains(value));
            }
        }
    }

    #[test]
    fn zero_constraints_is_a_pure_lookup_goal() {
        let ont = ontology();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let goal = sample_goal(&ont, 0, 2, None, &mut rng).unwrap();
        assert!(goal.constraints().is_empty());
        assert_eq!(goal.requests().len(), 2);
    }

    #[test]
    fn insufficient_slots_is_an_error() {
        let ont = ontology();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(sample_goal(&ont, 4, 0, None, &mut rng).is_err());
    }

    #[test]
    fn fill_request_is_monotone() {
        let mut goal = Goal::new(vec![], vec!["phone".into()]).unwrap();
        assert!(goal.fill_request("phone", "123"));
        assert!(!goal.fill_request("phone", "456"));
        assert_eq!(goal.request_value("phone"), Some("123"));
    }

    #[test]
    fn relax_drops_last_constraint() {
        let mut goal = Goal::new(
            vec![("type".into(), "bar".into()), ("area".into(), "central".into())],
            vec![],
        )
        .unwrap();
        assert_eq!(goal.relax_lowest(), Some(("area".into(), "central".into())));
        assert_eq!(goal.constraints().len(), 1);
    }
}
