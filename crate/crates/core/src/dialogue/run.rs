use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::acts::{DialogueAct, Intent};
use super::agenda::{init_agenda, receive_system_act, UpdateRules};
use super::goal::Goal;
use super::interaction::InteractionModel;
use super::nlg::{realize, TemplateSet};
use super::prefs::PreferenceStore;
use super::DialogueError;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Speaker {
    User,
    System,
}

/// One realized turn.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogueTurn {
    pub speaker: Speaker,
    pub act: DialogueAct,
    pub text: String,
}

/// Full transcript of one simulated dialogue.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogueLog {
    pub turns: Vec<DialogueTurn>,
    /// All requests filled, no constraint left violated, BYE reached.
    pub success: bool,
    pub failure_reason: Option<String>,
}

impl DialogueLog {
    pub fn user_turns(&self) -> usize {
        self.turns.iter().filter(|t| t.speaker == Speaker::User).count()
    }
}

/// Configuration of one agenda-based dialogue run.
#[derive(Debug, Clone)]
pub struct SimulatorConfig<'a> {
    pub goal: Goal,
    pub templates: &'a TemplateSet,
    pub interaction: Option<&'a InteractionModel>,
    pub rules: UpdateRules,
    /// Probability of popping two same-intent acts in one turn.
    pub p_pop_two: Scalar,
    /// Unexpected system responses tolerated (each answered by repeating the
    /// user act) before aborting.
    pub replacement_budget: usize,
}

impl<'a> SimulatorConfig<'a> {
    pub fn new(goal: Goal, templates: &'a TemplateSet) -> Self {
        Self {
            goal,
            templates,
            interaction: None,
            rules: UpdateRules::default(),
            p_pop_two: 0.3,
            replacement_budget: 2,
        }
    }
}

/// Run one dialogue against a semantic-level system (acts in, acts out; the
/// understanding step is bypassed).
///
/// Ends on BYE, goal completion, the turn limit, or an aborted exchange.
pub fn run_dialogue<R, S>(
    config: &SimulatorConfig,
    mut system: S,
    max_turns: usize,
    rng: &mut R,
) -> Result<DialogueLog, DialogueError>
where
    R: Rng + ?Sized,
    S: FnMut(&DialogueAct) -> DialogueAct,
{
    let mut goal = config.goal.clone();
    let mut agenda = init_agenda(&goal);
    let mut prefs = PreferenceStore::new();
    let mut turns: Vec<DialogueTurn> = Vec::new();
    let mut violated: BTreeSet<String> = BTreeSet::new();
    let mut replacements = 0usize;
    let mut bye_reached = false;
    let mut failure_reason = None;

    while turns.len() < max_turns {
        debug_assert!(agenda.invariants_hold());
        let n = if config.p_pop_two > 0.0
            && agenda.mergeable_top(2)
            && rng.random::<Scalar>() < config.p_pop_two
        {
            2
        } else {
            1
        };
        let user_act = match agenda.pop_user_act(n) {
            Ok(act) => act,
            Err(DialogueError::UnmergeableActs) => agenda.pop_user_act(1)?,
            Err(e) => return Err(e),
        };
        let text = realize(&user_act, config.templates, rng)?;
        turns.push(DialogueTurn { speaker: Speaker::User, act: user_act.clone(), text });
        if user_act.intent == Intent::Bye {
            bye_reached = true;
            break;
        }
        if turns.len() >= max_turns {
            break;
        }

        let sys_act = system(&user_act);
        if let Err(e) = DialogueAct::new(sys_act.intent.clone(), sys_act.slots.clone()) {
            failure_reason = Some(format!("malformed system act: {e}"));
            let text = sys_act.canonical();
            turns.push(DialogueTurn { speaker: Speaker::System, act: sys_act, text });
            break;
        }
        let sys_text = realize(&sys_act, config.templates, rng)
            .unwrap_or_else(|_| sys_act.canonical());
        turns.push(DialogueTurn { speaker: Speaker::System, act: sys_act.clone(), text: sys_text });

        // Track constraint violations before the goal may change.
        for sv in &sys_act.slots {
            if let (Some(goal_value), Some(value)) =
                (goal.constraint_value(&sv.slot), sv.value.as_deref())
            {
                if sys_act.intent != Intent::Request {
                    if goal_value != value {
                        violated.insert(sv.slot.clone());
                    } else {
                        violated.remove(&sv.slot);
                    }
                }
            }
        }

        if let Some(model) = config.interaction {
            if !model.check_expected(&user_act.intent, &sys_act.intent)? {
                if replacements < config.replacement_budget {
                    replacements += 1;
                    // Replacement push: repeat the misunderstood act.
                    agenda.push(user_act.clone());
                    agenda.cleanup(&goal);
                    continue;
                }
                failure_reason = Some("system kept responding unexpectedly".into());
                break;
            }
        }

        receive_system_act(&mut agenda, &mut goal, &mut prefs, &sys_act, &config.rules, rng)?;
    }

    let success = bye_reached
        && goal.all_requests_filled()
        && violated.is_empty()
        && failure_reason.is_none();
    Ok(DialogueLog { turns, success, failure_reason })
}

/// Corpus-level behavioural statistics over a set of dialogue logs.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogueStats {
    /// Mean turns per dialogue.
    pub avg_length: Scalar,
    /// Total user acts over total system acts.
    pub user_system_ratio: Scalar,
    /// Normalized intent frequencies over all acts.
    pub intent_distribution: BTreeMap<String, Scalar>,
    /// Fraction of requested slots that were eventually provided.
    pub cooperativeness: Scalar,
    pub success_rate: Scalar,
}

/// Aggregate behavioural statistics; needs at least one log.
pub fn corpus_stats(logs: &[DialogueLog]) -> Result<DialogueStats, DialogueError> {
    if logs.is_empty() {
        return Err(DialogueError::InvalidAct("corpus_stats needs at least one log".into()));
    }
    let mut total_turns = 0usize;
    let mut user_acts = 0usize;
    let mut system_acts = 0usize;
    let mut intents: BTreeMap<String, usize> = BTreeMap::new();
    let mut requested = 0usize;
    let mut provided = 0usize;
    let mut successes = 0usize;

    for log in logs {
        total_turns += log.turns.len();
        if log.success {
            successes += 1;
        }
        for (i, turn) in log.turns.iter().enumerate() {
            match turn.speaker {
                Speaker::User => user_acts += 1,
                Speaker::System => system_acts += 1,
            }
            *intents.entry(turn.act.intent.to_string()).or_insert(0) += 1;
            if turn.act.intent == Intent::Request {
                for sv in &turn.act.slots {
                    requested += 1;
                    let answered = log.turns[i + 1..].iter().any(|later| {
                        later.speaker != turn.speaker
                            && later.act.intent == Intent::Inform
                            && later.act.slots.iter().any(|lsv| {
                                lsv.slot == sv.slot && lsv.value.is_some()
                            })
                    });
                    if answered {
                        provided += 1;
                    }
                }
            }
        }
    }
    let total_acts = (user_acts + system_acts).max(1);
    let intent_distribution = intents
        .into_iter()
        .map(|(intent, n)| (intent, n as Scalar / total_acts as Scalar))
        .collect();
    Ok(DialogueStats {
        avg_length: total_turns as Scalar / logs.len() as Scalar,
        user_system_ratio: user_acts as Scalar / system_acts.max(1) as Scalar,
        intent_distribution,
        cooperativeness: if requested == 0 {
            1.0
        } else {
            provided as Scalar / requested as Scalar
        },
        success_rate: successes as Scalar / logs.len() as Scalar,
    })
}

/// A scripted fully cooperative system: affirms INFORMs and answers every
/// REQUEST with a made-up value for the asked slot.
pub fn cooperative_system(user_act: &DialogueAct) -> DialogueAct {
    match user_act.intent {
        Intent::Request => DialogueAct {
            intent: Intent::Inform,
            slots: user_act
                .slots
                .iter()
                .map(|sv| super::acts::SlotValue::valued(
                    sv.slot.clone(),
                    format!("{}-value", sv.slot),
                ))
                .collect(),
        },
        _ => DialogueAct { intent: Intent::Affirm, slots: vec![] },
    }
}
