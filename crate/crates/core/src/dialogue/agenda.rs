use rand::Rng;

use super::acts::{DialogueAct, Intent, SlotValue};
use super::goal::Goal;
use super::prefs::PreferenceStore;
use super::DialogueError;
use crate::Scalar;

/// Stack of pending dialogue acts; the top is executed next.
///
/// Invariants: exactly one `BYE`, always at the bottom, and no duplicate
/// acts after cleanup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agenda {
    /// Bottom-first storage; the last element is the top of the stack.
    stack: Vec<DialogueAct>,
}

/// Initialize the agenda from a goal: one `INFORM` per constraint on top,
/// one `REQUEST` per request below them, `BYE` at the bottom.
pub fn init_agenda(goal: &Goal) -> Agenda {
    let mut stack = vec![DialogueAct::bye()];
    for (slot, _) in goal.requests().iter().rev() {
        stack.push(DialogueAct::request(slot.clone()));
    }
    for (slot, value) in goal.constraints().iter().rev() {
        stack.push(DialogueAct::inform(slot.clone(), value.clone()));
    }
    Agenda { stack }
}

impl Agenda {
    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    /// Acts from top to bottom, the order they would be executed.
    pub fn acts_top_down(&self) -> Vec<&DialogueAct> {
        self.stack.iter().rev().collect()
    }

    pub fn peek(&self) -> Option<&DialogueAct> {
        self.stack.last()
    }

    /// Do the top `n` acts share an intent, making them mergeable?
    pub fn mergeable_top(&self, n: usize) -> bool {
        if n <= 1 || n > self.stack.len() {
            return n == 1 && !self.stack.is_empty();
        }
        let top = &self.stack[self.stack.len() - n..];
        let intent = &top[n - 1].intent;
        *intent != Intent::Bye && top.iter().all(|a| a.intent == *intent)
    }

    /// Pop the top `n` acts as one user act; same-intent acts merge with
    /// their slot-values concatenated in pop order. `BYE` never merges.
    pub fn pop_user_act(&mut self, n: usize) -> Result<DialogueAct, DialogueError> {
        if self.stack.is_empty() {
            return Err(DialogueError::EmptyAgenda);
        }
        let n = n.max(1);
        if n == 1 {
            return Ok(self.stack.pop().expect("checked non-empty"));
        }
        if n > self.stack.len() || !self.mergeable_top(n) {
            return Err(DialogueError::UnmergeableActs);
        }
        let mut slots: Vec<SlotValue> = Vec::new();
        let mut intent = None;
        for _ in 0..n {
            let act = self.stack.pop().expect("n <= len");
            intent = Some(act.intent.clone());
            slots.extend(act.slots);
        }
        Ok(DialogueAct { intent: intent.expect("n >= 1"), slots })
    }

    /// Push a new pending act on top.
    pub fn push(&mut self, act: DialogueAct) {
        self.stack.push(act);
    }

    /// Deterministic cleanup: drop duplicate acts (the copy nearest the top
    /// survives), drop `REQUEST`s for already-filled goal requests, drop
    /// `INFORM`s that no longer restate a goal constraint, and keep exactly
    /// one `BYE` at the bottom.
    pub fn cleanup(&mut self, goal: &Goal) {
        let mut seen: Vec<DialogueAct> = Vec::new();
        let mut kept: Vec<DialogueAct> = Vec::new();
        // Walk top-down so the newest copy of a duplicate wins.
        for act in self.stack.iter().rev() {
            if act.intent == Intent::Bye {
                continue;
            }
            if seen.contains(act) {
                continue;
            }
            let keep = match act.intent {
                Intent::Request => act
                    .slots
                    .iter()
                    .any(|sv| goal.is_request(&sv.slot) && goal.request_value(&sv.slot).is_none()),
                Intent::Inform => act.slots.iter().all(|sv| match &sv.value {
                    Some(v) => goal.constraint_value(&sv.slot) == Some(v.as_str()),
                    None => false,
                }),
                _ => true,
            };
            if keep {
                seen.push(act.clone());
                kept.push(act.clone());
            }
        }
        let mut stack = vec![DialogueAct::bye()];
        stack.extend(kept.into_iter().rev());
        self.stack = stack;
    }

    /// Check the agenda invariants.
    pub fn invariants_hold(&self) -> bool {
        let byes = self.stack.iter().filter(|a| a.intent == Intent::Bye).count();
        byes == 1 && self.stack.first().map(|a| a.intent == Intent::Bye).unwrap_or(false)
    }
}

/// Probabilities of the corrective pushes when a system value violates a
/// goal constraint, plus the intent signalling an unachievable goal.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateRules {
    pub p_negate: Scalar,
    pub p_inform: Scalar,
    pub p_deny: Scalar,
    pub nomatch_intent: Intent,
}

impl Default for UpdateRules {
    fn default() -> Self {
        Self {
            p_negate: 0.2,
            p_inform: 0.6,
            p_deny: 0.2,
            nomatch_intent: Intent::Custom("NOMATCH".into()),
        }
    }
}

impl UpdateRules {
    /// Always answer violations with a corrective `INFORM`; used by
    /// deterministic tests.
    pub fn deterministic_inform() -> Self {
        Self { p_negate: 0.0, p_inform: 1.0, p_deny: 0.0, ..Self::default() }
    }
}

/// Update goal and agenda after a system act: fill requests the system
/// answered, react to constraint violations with a corrective push, relax
/// the goal on an unachievable signal, then clean up.
pub fn receive_system_act<R: Rng + ?Sized>(
    agenda: &mut Agenda,
    goal: &mut Goal,
    prefs: &mut PreferenceStore,
    sys: &DialogueAct,
    rules: &UpdateRules,
    rng: &mut R,
) -> Result<(), DialogueError> {
    if sys.intent == rules.nomatch_intent {
        goal.relax_lowest();
        agenda.cleanup(goal);
        return Ok(());
    }

    if sys.intent == Intent::Request {
        // The system asks about a slot: answer from the goal, or from the
        // stored preferences when the goal is silent.
        for sv in &sys.slots {
            if let Some(value) = goal.constraint_value(&sv.slot) {
                agenda.push(DialogueAct::inform(sv.slot.clone(), value.to_string()));
            } else if let Some(value) = &sv.value {
                let pref = prefs.get_or_generate(&sv.slot, value, rng);
                if pref > 0.0 {
                    agenda.push(DialogueAct::inform(sv.slot.clone(), value.clone()));
                } else {
                    agenda.push(DialogueAct {
                        intent: Intent::Negate,
                        slots: vec![SlotValue::valued(sv.slot.clone(), value.clone())],
                    });
                }
            }
        }
    }

    for sv in &sys.slots {
        let Some(value) = &sv.value else { continue };
        if goal.is_request(&sv.slot) {
            goal.fill_request(&sv.slot, value);
            continue;
        }
        if let Some(goal_value) = goal.constraint_value(&sv.slot) {
            if goal_value != value && sys.intent != Intent::Request {
                push_correction(agenda, &sv.slot, value, goal_value, rules, rng);
            }
        }
    }
    agenda.cleanup(goal);
    Ok(())
}

fn push_correction<R: Rng + ?Sized>(
    agenda: &mut Agenda,
    slot: &str,
    sys_value: &str,
    goal_value: &str,
    rules: &UpdateRules,
    rng: &mut R,
) {
    let total = rules.p_negate + rules.p_inform + rules.p_deny;
    let u: Scalar = rng.random::<Scalar>() * total.max(1e-12);
    let act = if u < rules.p_negate {
        DialogueAct {
            intent: Intent::Negate,
            slots: vec![SlotValue::valued(slot, sys_value)],
        }
    } else if u < rules.p_negate + rules.p_inform {
        DialogueAct::inform(slot, goal_value)
    } else {
        DialogueAct {
            intent: Intent::Deny,
            slots: vec![SlotValue::valued(slot, sys_value), SlotValue::valued(slot, goal_value)],
        }
    };
    agenda.push(act);
}
