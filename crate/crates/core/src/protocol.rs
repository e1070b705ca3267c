//! The two teaching protocols as explicit state machines, plus exhaustive
//! search for optimal per-feature-set teaching costs.
//!
//! Open-Featuring lets the teacher freely interleave feature and example
//! additions; Error-Driven-Featuring only admits a feature while some
//! training example is misclassified. In both, the learner retrains after
//! every action and the protocol terminates the moment the classifier
//! matches the target on the whole pool. Honest labels are supplied by the
//! protocol itself, so a teacher action is just a feature id or an object
//! id.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costs::{Cost, FeatureContext, SearchBudget};
use crate::error::{Error, Result};
use crate::instance::{FeatureId, FeatureSet, Instance, ObjectId, TrainingSet};
use crate::learners::{Classifier, LearnerKind};

/// Protocol selector: `open` or `edf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Protocol {
    Open,
    ErrorDriven,
}

impl Protocol {
    pub const ALL: [Protocol; 2] = [Protocol::Open, Protocol::ErrorDriven];

    pub fn id(self) -> &'static str {
        match self {
            Protocol::Open => "open",
            Protocol::ErrorDriven => "edf",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "open" => Ok(Protocol::Open),
            "edf" => Ok(Protocol::ErrorDriven),
            other => Err(Error::InvalidParams(format!("unknown protocol {other:?} (use open or edf)"))),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Where the state machine sits between actions. `OuterCheck` is the
/// transient pool-error re-evaluation after an action; step functions
/// always resolve it before returning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    OuterCheck,
    AwaitAction,
    InnerFeaturing,
    Terminated,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::OuterCheck => "outer-check",
            Phase::AwaitAction => "await-action",
            Phase::InnerFeaturing => "inner-featuring",
            Phase::Terminated => "terminated",
        };
        f.write_str(s)
    }
}

/// A snapshot of the protocol: current feature set, training set, the
/// retrained classifier, and the phase. The classifier always equals the
/// learner's output on `(feature_set, training)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolState {
    pub feature_set: FeatureSet,
    pub training: TrainingSet,
    pub classifier: Classifier,
    pub phase: Phase,
}

impl ProtocolState {
    pub fn is_terminated(&self) -> bool {
        self.phase == Phase::Terminated
    }

    /// Canonical one-line rendering used in transcripts.
    pub fn digest(&self) -> String {
        format!("F={} T={} phase={}", self.feature_set, self.training, self.phase)
    }
}

/// One teacher move.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TeacherAction {
    AddFeature(FeatureId),
    AddExample(ObjectId),
}

impl fmt::Display for TeacherAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TeacherAction::AddFeature(id) => write!(f, "add_feature {id}"),
            TeacherAction::AddExample(id) => write!(f, "add_example {id}"),
        }
    }
}

/// Script entry in the external run-request format:
/// `{"add_feature": "f1"}` or `{"add_example": "x2"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptEntry {
    Feature {
        add_feature: String,
    },
    Example {
        add_example: String,
    },
}

impl From<&ScriptEntry> for TeacherAction {
    fn from(e: &ScriptEntry) -> Self {
        match e {
            ScriptEntry::Feature { add_feature } => {
                TeacherAction::AddFeature(FeatureId::new(add_feature.clone()))
            }
            ScriptEntry::Example { add_example } => {
                TeacherAction::AddExample(ObjectId::new(add_example.clone()))
            }
        }
    }
}

/// Load a teacher script: a JSON array of script entries.
pub fn load_script(path: impl AsRef<Path>) -> Result<Vec<TeacherAction>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::MalformedDocument(format!("{}: {e}", path.as_ref().display())))?;
    parse_script(&text)
}

pub fn parse_script(text: &str) -> Result<Vec<TeacherAction>> {
    let entries: Vec<ScriptEntry> =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    Ok(entries.iter().map(TeacherAction::from).collect())
}

/// Start a protocol run: empty feature set, empty training set, and the
/// learner's empty-data classifier. Terminated immediately when that
/// classifier already matches the target pool-wide.
pub fn protocol_start(inst: &Instance, learner: LearnerKind) -> Result<ProtocolState> {
    let fs = FeatureSet::empty();
    if !inst.lattice().contains(&fs) {
        return Err(Error::FeatureSetNotInLattice(fs));
    }
    let training = TrainingSet::empty();
    make_state(inst, learner, fs, training, Protocol::Open)
}

fn retrain(inst: &Instance, learner: LearnerKind, fs: &FeatureSet, t: &TrainingSet) -> Result<Classifier> {
    let ctx = FeatureContext::new(inst, fs)?;
    let ixs: Vec<usize> = t
        .iter()
        .map(|(x, _)| inst.object_index(x))
        .collect::<Result<_>>()?;
    ctx.train(learner, &ixs)
}

/// Retrain and resolve the transient `OuterCheck` phase into an observable
/// one. For EDF, a persisting training error forces `InnerFeaturing` (or
/// reports `ProtocolStuck` when the lattice offers no successor feature).
fn make_state(
    inst: &Instance,
    learner: LearnerKind,
    fs: FeatureSet,
    training: TrainingSet,
    protocol: Protocol,
) -> Result<ProtocolState> {
    let classifier = retrain(inst, learner, &fs, &training)?;
    let mut state = ProtocolState { feature_set: fs, training, classifier, phase: Phase::OuterCheck };
    if protocol == Protocol::ErrorDriven && has_training_error(inst, &state)? {
        if inst.successor_features(&state.feature_set)?.is_empty() {
            return Err(Error::ProtocolStuck);
        }
        state.phase = Phase::InnerFeaturing;
        return Ok(state);
    }
    state.phase = if pool_correct(inst, &state)? { Phase::Terminated } else { Phase::AwaitAction };
    Ok(state)
}

fn pool_correct(inst: &Instance, state: &ProtocolState) -> Result<bool> {
    for (ix, x) in inst.objects().iter().enumerate() {
        let pt = inst.featurize(&state.feature_set, x)?;
        if state.classifier.predict(&pt)? != inst.target_ix(ix) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn has_training_error(inst: &Instance, state: &ProtocolState) -> Result<bool> {
    for (x, y) in state.training.iter() {
        let pt = inst.featurize(&state.feature_set, x)?;
        if state.classifier.predict(&pt)? != y {
            return Ok(true);
        }
    }
    Ok(false)
}

fn apply_add_feature(inst: &Instance, state: &ProtocolState, f: &FeatureId) -> Result<FeatureSet> {
    let choices = inst.successor_features(&state.feature_set)?;
    if !choices.contains(f) {
        return Err(Error::illegal(format!(
            "feature {f} is not a lattice successor of {}",
            state.feature_set
        )));
    }
    Ok(state.feature_set.with(f.clone()))
}

fn apply_add_example(inst: &Instance, state: &ProtocolState, x: &ObjectId) -> Result<TrainingSet> {
    let label = inst.target(x)?;
    if state.training.contains(x) {
        return Err(Error::illegal(format!("object {x} is already in the training set")));
    }
    let mut t = state.training.clone();
    t.insert(x.clone(), label).expect("membership checked above");
    Ok(t)
}

/// One Open-Featuring step: the teacher chooses freely between adding a
/// lattice-successor feature and adding a fresh honest example.
pub fn step_open(
    inst: &Instance,
    learner: LearnerKind,
    state: &ProtocolState,
    action: &TeacherAction,
) -> Result<ProtocolState> {
    if state.is_terminated() {
        return Err(Error::illegal("protocol already terminated"));
    }
    let (fs, training) = match action {
        TeacherAction::AddFeature(f) => {
            (apply_add_feature(inst, state, f)?, state.training.clone())
        }
        TeacherAction::AddExample(x) => {
            (state.feature_set.clone(), apply_add_example(inst, state, x)?)
        }
    };
    make_state(inst, learner, fs, training, Protocol::Open)
}

/// One Error-Driven-Featuring step. Examples are only legal while no
/// training example is misclassified; features are only legal while one is.
pub fn step_edf(
    inst: &Instance,
    learner: LearnerKind,
    state: &ProtocolState,
    action: &TeacherAction,
) -> Result<ProtocolState> {
    match (state.phase, action) {
        (Phase::Terminated, _) => Err(Error::illegal("protocol already terminated")),
        (Phase::AwaitAction, TeacherAction::AddExample(x)) => {
            let training = apply_add_example(inst, state, x)?;
            make_state(inst, learner, state.feature_set.clone(), training, Protocol::ErrorDriven)
        }
        (Phase::AwaitAction, TeacherAction::AddFeature(_)) => Err(Error::illegal(
            "features may only be added while a training example is misclassified",
        )),
        (Phase::InnerFeaturing, TeacherAction::AddFeature(f)) => {
            let fs = apply_add_feature(inst, state, f)?;
            make_state(inst, learner, fs, state.training.clone(), Protocol::ErrorDriven)
        }
        (Phase::InnerFeaturing, TeacherAction::AddExample(_)) => Err(Error::illegal(
            "examples may not be added while a training error is being fixed",
        )),
        (Phase::OuterCheck, _) => unreachable!("outer check resolves before any action"),
    }
}

pub fn step(
    inst: &Instance,
    learner: LearnerKind,
    protocol: Protocol,
    state: &ProtocolState,
    action: &TeacherAction,
) -> Result<ProtocolState> {
    match protocol {
        Protocol::Open => step_open(inst, learner, state, action),
        Protocol::ErrorDriven => step_edf(inst, learner, state, action),
    }
}

/// A teacher strategy: queried once per non-terminated state.
pub trait Teacher {
    fn next_action(&mut self, state: &ProtocolState) -> Option<TeacherAction>;
}

/// Replays a fixed action list.
pub struct ScriptTeacher {
    actions: Vec<TeacherAction>,
    cursor: usize,
}

impl ScriptTeacher {
    pub fn new(actions: Vec<TeacherAction>) -> Self {
        ScriptTeacher { actions, cursor: 0 }
    }
}

impl Teacher for ScriptTeacher {
    fn next_action(&mut self, _state: &ProtocolState) -> Option<TeacherAction> {
        let a = self.actions.get(self.cursor).cloned();
        self.cursor += 1;
        a
    }
}

/// One transcript entry: the digest of the state the action was taken in,
/// and the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptStep {
    pub state_digest: String,
    pub action: TeacherAction,
}

/// A replayable protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<TranscriptStep>,
    pub final_feature_set: FeatureSet,
    pub final_training: TrainingSet,
    pub label_count: usize,
    pub feature_count: usize,
    pub terminated: bool,
}

impl Transcript {
    pub fn teaching_cost(&self) -> TeachingCost {
        TeachingCost {
            features: self.feature_count,
            labels: if self.terminated { Cost::Finite(self.label_count) } else { Cost::Infinite },
        }
    }
}

/// Drive a teacher to termination. Errors are sharp: an illegal action or a
/// stuck protocol aborts the run with the offending step index attached.
pub fn run_protocol(
    inst: &Instance,
    learner: LearnerKind,
    protocol: Protocol,
    teacher: &mut dyn Teacher,
    max_steps: usize,
) -> Result<Transcript> {
    let mut state = protocol_start(inst, learner)?;
    let mut steps: Vec<TranscriptStep> = Vec::new();
    while !state.is_terminated() {
        if steps.len() >= max_steps {
            return Err(Error::StepLimitExceeded(max_steps));
        }
        let step_index = steps.len();
        let action = teacher
            .next_action(&state)
            .ok_or(Error::ScriptExhausted { step: step_index })?;
        let next = step(inst, learner, protocol, &state, &action)
            .map_err(|e| e.at_step(step_index))?;
        steps.push(TranscriptStep { state_digest: state.digest(), action });
        state = next;
    }
    let label_count = steps
        .iter()
        .filter(|s| matches!(s.action, TeacherAction::AddExample(_)))
        .count();
    let feature_count = state.feature_set.len();
    debug_assert_eq!(label_count, state.training.len());
    Ok(Transcript {
        steps,
        final_feature_set: state.feature_set,
        final_training: state.training,
        label_count,
        feature_count,
        terminated: true,
    })
}

/// The teaching cost of a protocol run targeting one feature set: features
/// added and labels added, the label count infinite when no legal teacher
/// behavior terminates at that feature set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeachingCost {
    pub features: usize,
    pub labels: Cost,
}

impl fmt::Display for TeachingCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.features, self.labels)
    }
}

/// Exhaustive optimal teaching costs for every lattice feature set at once.
///
/// Explores all protocol-reachable `(F, T)` states (memoized on exactly
/// that pair; labels are forced by honesty), records terminal states, and
/// reports per feature set the minimum label count over teacher behaviors
/// that terminate with that exact final feature set.
pub fn optimal_costs(
    inst: &Instance,
    learner: LearnerKind,
    protocol: Protocol,
    budget: &SearchBudget,
) -> Result<BTreeMap<FeatureSet, TeachingCost>> {
    let n = inst.len();
    if n > 64 {
        return Err(Error::InvalidParams(format!(
            "optimal-cost search supports pools of at most 64 objects, got {n}"
        )));
    }
    let lattice = inst.lattice();
    let start_fs = lattice
        .position(&FeatureSet::empty())
        .ok_or_else(|| Error::FeatureSetNotInLattice(FeatureSet::empty()))?;

    let contexts: Vec<FeatureContext> = lattice
        .sets()
        .iter()
        .map(|fs| FeatureContext::new(inst, fs))
        .collect::<Result<_>>()?;
    // Feature edges of the lattice: positions of each set's successors.
    let successor_ix: Vec<Vec<usize>> = lattice
        .sets()
        .iter()
        .map(|fs| {
            Ok(inst
                .successor_features(fs)?
                .into_iter()
                .map(|f| lattice.position(&fs.with(f)).expect("successor is a member"))
                .collect())
        })
        .collect::<Result<_>>()?;

    #[derive(Clone, Copy)]
    struct StateInfo {
        terminal: bool,
        training_error: bool,
    }
    let eval = |fs_ix: usize, mask: u64| -> Result<StateInfo> {
        let ctx = &contexts[fs_ix];
        let c = ctx.train_mask(learner, mask)?;
        let terminal = ctx.pool_correct(&c)?;
        let training_error = if terminal {
            false
        } else {
            ctx.training_error(&c, crate::costs::mask_indices(mask, n))?
        };
        Ok(StateInfo { terminal, training_error })
    };

    let mut best: HashMap<usize, usize> = HashMap::new();
    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    let mut queue: VecDeque<(usize, u64)> = VecDeque::new();
    let mut states: u64 = 0;
    seen.insert((start_fs, 0));
    queue.push_back((start_fs, 0));
    while let Some((fs_ix, mask)) = queue.pop_front() {
        states += 1;
        if states > budget.max_states {
            return Err(Error::BudgetExceeded {
                states,
                size_reached: mask.count_ones() as usize,
            });
        }
        let info = eval(fs_ix, mask)?;
        if info.terminal {
            let labels = mask.count_ones() as usize;
            best.entry(fs_ix)
                .and_modify(|b| *b = (*b).min(labels))
                .or_insert(labels);
            continue; // termination is not a teacher choice
        }
        let may_feature = match protocol {
            Protocol::Open => true,
            Protocol::ErrorDriven => info.training_error,
        };
        let may_example = match protocol {
            Protocol::Open => true,
            Protocol::ErrorDriven => !info.training_error,
        };
        if may_feature {
            for &next_fs in &successor_ix[fs_ix] {
                if seen.insert((next_fs, mask)) {
                    queue.push_back((next_fs, mask));
                }
            }
        }
        if may_example {
            for ix in 0..n {
                let bit = 1u64 << ix;
                if mask & bit == 0 && seen.insert((fs_ix, mask | bit)) {
                    queue.push_back((fs_ix, mask | bit));
                }
            }
        }
    }

    let mut out = BTreeMap::new();
    for (ix, fs) in lattice.sets().iter().enumerate() {
        let labels = best.get(&ix).map(|&l| Cost::Finite(l)).unwrap_or(Cost::Infinite);
        out.insert(fs.clone(), TeachingCost { features: fs.len(), labels });
    }
    Ok(out)
}

/// Optimal teaching cost for a single target feature set.
pub fn optimal_teaching_cost(
    inst: &Instance,
    learner: LearnerKind,
    protocol: Protocol,
    target: &FeatureSet,
    budget: &SearchBudget,
) -> Result<TeachingCost> {
    if !inst.lattice().contains(target) {
        return Err(Error::FeatureSetNotInLattice(target.clone()));
    }
    let all = optimal_costs(inst, learner, protocol, budget)?;
    Ok(all[target])
}
