//! Instance-level agenda separability (AS) and overlapping agenda
//! separability (OAS) checks, random instance generators, and a randomized
//! property suite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agenda::{Agenda, JudgmentSet, Profile, Sign};
use crate::decomposition::{
    aggregate_via_decomposition, blockwise_outputs, combine_blockwise, Decomposition,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::logic::{self, Formula};
use crate::rules::{Outcome, RuleId, ScoringFunction, TieBreaker};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Violated,
    /// OAS only: some blockwise outputs disagree on the overlap.
    PremiseNotSatisfied,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    As,
    Oas,
    /// AS of the rule composed with a tie-breaking priority.
    ResoluteAs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub direct: Vec<JudgmentSet>,
    pub recombined: Vec<JudgmentSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparabilityReport {
    pub rule: String,
    pub property: Property,
    pub decomposition: Decomposition,
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Violated`.
    pub witness: Option<Witness>,
}

fn report(
    rule: &RuleId,
    property: Property,
    d: &Decomposition,
    direct: Outcome,
    recombined: Outcome,
) -> SeparabilityReport {
    let (verdict, witness) = if direct == recombined {
        (Verdict::Holds, None)
    } else {
        let w = Witness { direct: direct.into_iter().collect(), recombined: recombined.into_iter().collect() };
        (Verdict::Violated, Some(w))
    };
    SeparabilityReport { rule: rule.name().to_string(), property, decomposition: d.clone(), verdict, witness }
}

/// Compares `R(P)` with the unions of the blockwise outputs over an
/// independent partition.
pub fn check_as_instance(rule: &RuleId, p: &Profile, d: &Decomposition) -> Result<SeparabilityReport> {
    let recombined = aggregate_via_decomposition(rule, p, d)?;
    let direct = rule.apply(p)?;
    Ok(report(rule, Property::As, d, direct, recombined))
}

/// OAS on a two-block cover. When some pair of blockwise outputs disagrees on
/// the overlap the premise fails and nothing is compared.
pub fn check_oas_instance(rule: &RuleId, p: &Profile, d: &Decomposition) -> Result<SeparabilityReport> {
    let [b1, b2] = d.blocks() else {
        return Err(Error::Precondition("OAS needs a two-block decomposition".into()));
    };
    let outputs = blockwise_outputs(rule, p, d)?;
    let m = p.agenda().len();
    let premise = outputs[0].iter().all(|j1| {
        outputs[1].iter().all(|j2| {
            JudgmentSet::empty(m).merged(b1, j1).and_then(|u| u.merged(b2, j2)).is_some()
        })
    });
    if !premise {
        return Ok(SeparabilityReport {
            rule: rule.name().to_string(),
            property: Property::Oas,
            decomposition: d.clone(),
            verdict: Verdict::PremiseNotSatisfied,
            witness: None,
        });
    }
    let recombined = combine_blockwise(m, d.blocks(), &outputs);
    let direct = rule.apply(p)?;
    Ok(report(rule, Property::Oas, d, direct, recombined))
}

/// Compares `R_θ(P)` with the union of the blockwise `R_θ` winners.
pub fn check_resolute_as_instance(
    rule: &RuleId,
    theta: &TieBreaker,
    p: &Profile,
    d: &Decomposition,
) -> Result<SeparabilityReport> {
    if !d.is_partition() {
        return Err(Error::Precondition("AS needs an independent partition".into()));
    }
    let direct = rule.apply_resolute(p, theta)?;
    let mut parts = Vec::with_capacity(d.blocks().len());
    for b in d.blocks() {
        parts.push(Outcome::from([rule.apply_resolute(&p.restrict(b)?, theta)?]));
    }
    let recombined = combine_blockwise(p.agenda().len(), d.blocks(), &parts);
    Ok(report(rule, Property::ResoluteAs, d, Outcome::from([direct]), recombined))
}

/// Whether `s(J, φ) = s(J ∩ A_i, φ)` for every `J ∈ J_A`, block `A_i`, and
/// signed issue `φ` of that block, the right side scored over the sub-agenda.
pub fn check_scoring_separability(s: &dyn ScoringFunction, agenda: &Agenda, d: &Decomposition) -> Result<bool> {
    if !d.is_partition() {
        return Err(Error::Precondition("scoring separability needs an independent partition".into()));
    }
    for b in d.blocks() {
        let sub = agenda.sub_agenda(b)?;
        for j in agenda.complete_sets() {
            let local = j.restrict(b);
            for (k, &pos) in b.iter().enumerate() {
                for sign in [Sign::Plus, Sign::Minus] {
                    if s.score(agenda, j, pos, sign) != s.score(&sub, &local, k, sign) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `n` members drawn uniformly with replacement from `J_A`.
pub fn random_profile(agenda: Arc<Agenda>, n: usize, seed: u64) -> Result<Profile> {
    if n == 0 {
        return Err(Error::EmptyInput("a profile needs at least one member"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = agenda.complete_sets();
    let members = (0..n).map(|_| sets[rng.random_range(0..sets.len())].clone()).collect();
    Profile::new(agenda, members)
}

fn random_formula(rng: &mut ChaCha8Rng, atoms: &[String], depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        let a = Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone());
        return if rng.random_bool(0.25) { Formula::not(a) } else { a };
    }
    let l = random_formula(rng, atoms, depth - 1);
    match rng.random_range(0..5) {
        0 => Formula::and(l, random_formula(rng, atoms, depth - 1)),
        1 => Formula::or(l, random_formula(rng, atoms, depth - 1)),
        2 => Formula::implies(l, random_formula(rng, atoms, depth - 1)),
        3 => Formula::iff(l, random_formula(rng, atoms, depth - 1)),
        _ => Formula::not(l),
    }
}

/// Appends `count` fresh contingent formulas over `atoms` to `issues`,
/// skipping anything in `avoid`.
fn push_issues(
    rng: &mut ChaCha8Rng,
    atoms: &[String],
    count: usize,
    avoid: &[Formula],
    issues: &mut Vec<Formula>,
) -> Result<()> {
    let solver = logic::Solver::default();
    let mut added = 0;
    for _ in 0..200 {
        if added == count {
            return Ok(());
        }
        let f = random_formula(rng, atoms, 2);
        if issues.contains(&f)
            || avoid.contains(&f)
            || logic::is_tautology(&f, &Formula::True, &solver)?
            || logic::is_contradiction(&f, &Formula::True, &solver)?
        {
            continue;
        }
        issues.push(f);
        added += 1;
    }
    if added == 0 {
        return Err(Error::Precondition("could not generate a contingent issue".into()));
    }
    Ok(())
}

fn atom_names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|k| format!("{prefix}{k}")).collect()
}

/// An agenda of `blocks` groups of one to three issues, each group over its
/// own `atoms_per_block` atoms, with the grouping certified as an independent
/// partition.
pub fn random_decomposable_agenda(
    blocks: usize,
    atoms_per_block: usize,
    seed: u64,
) -> Result<(Agenda, Decomposition)> {
    if blocks == 0 || atoms_per_block == 0 {
        return Err(Error::EmptyInput("blocks and atoms per block must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut issues = Vec::new();
    let mut groups = Vec::new();
    for b in 0..blocks {
        let atoms = atom_names(&format!("b{b}_"), atoms_per_block);
        let start = issues.len();
        let count = rng.random_range(1..=3);
        push_issues(&mut rng, &atoms, count, &[], &mut issues)?;
        groups.push((start..issues.len()).collect());
    }
    let agenda = Agenda::new(issues, Formula::True)?;
    let d = Decomposition::certify_partition(&agenda, groups)?;
    Ok((agenda, d))
}

/// An agenda with a certified two-block overlapping decomposition. The blocks
/// share the issues over a small set of shared atoms, including each shared
/// atom itself, so agreement on the overlap pins the shared atoms.
pub fn random_iod_agenda(seed: u64) -> Result<(Agenda, Decomposition)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared = atom_names("s", rng.random_range(1..=2));
    let left: Vec<String> = atom_names("x", rng.random_range(1..=2)).into_iter().chain(shared.clone()).collect();
    let right: Vec<String> = atom_names("z", rng.random_range(1..=2)).into_iter().chain(shared.clone()).collect();

    let literals: Vec<Formula> = shared.iter().map(|a| Formula::Atom(a.clone())).collect();
    let mut issues = Vec::new();
    let n_left = rng.random_range(1..=2);
    push_issues(&mut rng, &left, n_left, &literals, &mut issues)?;
    let left_end = issues.len();
    issues.extend(literals);
    if rng.random_bool(0.5) {
        push_issues(&mut rng, &shared, 1, &[], &mut issues)?;
    }
    let overlap_end = issues.len();
    let n_right = rng.random_range(1..=2);
    push_issues(&mut rng, &right, n_right, &[], &mut issues)?;

    let agenda = Agenda::new(issues, Formula::True)?;
    let b1: Vec<usize> = (0..overlap_end).collect();
    let b2: Vec<usize> = (left_end..agenda.len()).collect();
    let d = Decomposition::certify_iod(&agenda, &b1, &b2)?;
    Ok((agenda, d))
}

/// Sizes and seeds for the randomized property suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    /// Random instances per family (independent partitions, overlapping
    /// decompositions).
    pub trials: usize,
    pub seed: u64,
    pub max_blocks: usize,
    pub max_atoms_per_block: usize,
    pub agents: Vec<usize>,
    /// Random overlapping instances tried when hunting for an `R_rev` OAS
    /// counterexample.
    pub rev_oas_budget: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 200,
            seed: 0,
            max_blocks: 3,
            max_atoms_per_block: 2,
            agents: vec![1, 3, 5],
            rev_oas_budget: 300,
        }
    }
}

/// A profile with a certified decomposition of its agenda.
#[derive(Clone, Debug)]
pub struct Instance {
    pub profile: Profile,
    pub decomposition: Decomposition,
}

fn pick_agents(rng: &mut ChaCha8Rng, agents: &[usize]) -> usize {
    agents[rng.random_range(0..agents.len())]
}

/// Random profiles over random decomposable agendas, per `config`. Every
/// agenda has at least two blocks unless `max_blocks` is 1.
pub fn random_partition_instances(config: &SuiteConfig) -> Result<Vec<Instance>> {
    if config.agents.is_empty() {
        return Err(Error::EmptyInput("agent counts"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.trials);
    for _ in 0..config.trials {
        let max = config.max_blocks.max(1);
        let blocks = rng.random_range(max.min(2)..=max);
        let atoms = rng.random_range(1..=config.max_atoms_per_block.max(1));
        let (agenda, d) = random_decomposable_agenda(blocks, atoms, rng.random())?;
        let n = pick_agents(&mut rng, &config.agents);
        let profile = random_profile(Arc::new(agenda), n, rng.random())?;
        out.push(Instance { profile, decomposition: d });
    }
    Ok(out)
}

/// Two-block covers for OAS checks: the multi-block partition instances
/// merged down to two blocks, then random overlapping decompositions.
pub fn random_iod_instances(config: &SuiteConfig, partitions: &[Instance]) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for inst in partitions {
        let blocks = inst.decomposition.blocks();
        if blocks.len() < 2 {
            continue;
        }
        let rest: Vec<usize> = blocks[1..].concat();
        let d = Decomposition::certify_iod(inst.profile.agenda(), &blocks[0], &rest)?;
        out.push(Instance { profile: inst.profile.clone(), decomposition: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x10d);
    for _ in 0..config.trials {
        let (agenda, d) = random_iod_agenda(rng.random())?;
        let n = pick_agents(&mut rng, &config.agents);
        let profile = random_profile(Arc::new(agenda), n, rng.random())?;
        out.push(Instance { profile, decomposition: d });
    }
    Ok(out)
}

/// Tally for one property over a family of instances.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub checked: usize,
    pub holds: usize,
    pub premise_not_satisfied: usize,
    pub failures: usize,
    /// The first few failures, described.
    pub notes: Vec<String>,
}

impl PropertyOutcome {
    fn new(name: impl Into<String>) -> Self {
        PropertyOutcome { name: name.into(), ..Default::default() }
    }

    fn fail(&mut self, note: String) {
        self.failures += 1;
        if self.notes.len() < 5 {
            self.notes.push(note);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub issues: Vec<String>,
    pub blocks: Vec<Vec<usize>>,
    pub profile: Vec<JudgmentSet>,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct RevHunt {
    pub trials: usize,
    /// `None` means nothing was found within budget, not that none exists.
    pub found: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub partition_instances: usize,
    pub iod_instances: usize,
    pub properties: Vec<PropertyOutcome>,
    pub rev_oas_hunt: RevHunt,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

fn describe(inst: &Instance) -> String {
    let issues: Vec<String> = inst.profile.agenda().issues().iter().map(|f| f.to_string()).collect();
    let rows: Vec<String> = inst.profile.members().iter().map(|j| j.to_string()).collect();
    format!("issues [{}] blocks {:?} profile [{}]", issues.join(", "), inst.decomposition.blocks(), rows.join(" "))
}

fn expect_violation(name: &str, r: Result<SeparabilityReport>) -> PropertyOutcome {
    let mut o = PropertyOutcome::new(name);
    o.checked = 1;
    match r {
        Ok(rep) if rep.verdict == Verdict::Violated => o.holds = 1,
        Ok(rep) => o.fail(format!("expected VIOLATED, got {:?}", rep.verdict)),
        Err(e) => o.fail(e.to_string()),
    }
    o
}

fn replays() -> Result<Vec<PropertyOutcome>> {
    let mut out = Vec::new();
    let f1 = fixtures::f1();
    let d1 = Decomposition::certify_partition(f1.agenda(), fixtures::blocks(&fixtures::F1_BLOCKS))?;
    out.push(expect_violation("replay/f1/as/rmax", check_as_instance(&RuleId::Rmax, &f1, &d1)));

    let f2 = fixtures::f2();
    let [b1, b2] = fixtures::F2_BLOCKS;
    let d2 = Decomposition::certify_iod(f2.agenda(), b1, b2)?;
    for rule in [RuleId::Mcc, RuleId::Med, RuleId::FullH] {
        out.push(expect_violation(&format!("replay/f2/oas/{rule}"), check_oas_instance(&rule, &f2, &d2)));
    }

    // a priority that is not agenda separable: each single issue prefers its
    // negation, the two-issue agenda prefers accepting both
    let f4 = fixtures::f4();
    let d4 = Decomposition::certify_partition(f4.agenda(), fixtures::blocks(&fixtures::F4_BLOCKS))?;
    let theta = TieBreaker::Priority(vec!["-".parse()?, "++".parse()?]);
    for rule in RuleId::AGENDA_SEPARABLE {
        let mut o = PropertyOutcome::new(format!("replay/f4/adversarial_tiebreak/{rule}"));
        o.checked = 1;
        let rep = check_resolute_as_instance(&rule, &theta, &f4, &d4)?;
        let expected = Witness { direct: vec!["++".parse()?], recombined: vec!["--".parse()?] };
        if rep.witness.as_ref() == Some(&expected) {
            o.holds = 1;
        } else {
            o.fail(format!("unexpected composition {:?}", rep.witness));
        }
        out.push(o);
    }
    Ok(out)
}

fn tally(o: &mut PropertyOutcome, inst: &Instance, r: Result<SeparabilityReport>) {
    o.checked += 1;
    match r {
        Ok(rep) => match rep.verdict {
            Verdict::Holds => o.holds += 1,
            Verdict::PremiseNotSatisfied if inst.decomposition.is_partition() => {
                o.fail(format!("premise failed on disjoint blocks: {}", describe(inst)))
            }
            Verdict::PremiseNotSatisfied => o.premise_not_satisfied += 1,
            Verdict::Violated => o.fail(format!("{}; witness {:?}", describe(inst), rep.witness)),
        },
        Err(e) => o.fail(format!("{}: {e}", describe(inst))),
    }
}

/// Runs the randomized AS and OAS checks, the fixed counterexample replays,
/// and the budgeted `R_rev` OAS counterexample hunt. Errors while building
/// instances abort; errors on an instance count as failures.
pub fn run_property_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let partitions = random_partition_instances(config)?;
    let iods = random_iod_instances(config, &partitions)?;
    let mut properties = Vec::new();
    let theta = TieBreaker::default();

    for rule in RuleId::AGENDA_SEPARABLE {
        let mut plain = PropertyOutcome::new(format!("as/{rule}"));
        let mut resolute = PropertyOutcome::new(format!("resolute_as/{rule}"));
        for inst in &partitions {
            tally(&mut plain, inst, check_as_instance(&rule, &inst.profile, &inst.decomposition));
            tally(&mut resolute, inst, check_resolute_as_instance(&rule, &theta, &inst.profile, &inst.decomposition));
        }
        properties.push(plain);
        properties.push(resolute);
    }
    for rule in [RuleId::Mc, RuleId::Ra] {
        let mut o = PropertyOutcome::new(format!("oas/{rule}"));
        for inst in &iods {
            tally(&mut o, inst, check_oas_instance(&rule, &inst.profile, &inst.decomposition));
        }
        properties.push(o);
    }
    properties.extend(replays()?);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4e7);
    let mut found = None;
    let mut trials = 0;
    while trials < config.rev_oas_budget && found.is_none() {
        trials += 1;
        let (agenda, d) = random_iod_agenda(rng.random())?;
        let n = [2, 3, 4, 5][rng.random_range(0..4)];
        let profile = random_profile(Arc::new(agenda), n, rng.random())?;
        let rep = check_oas_instance(&RuleId::Rev, &profile, &d)?;
        if let Some(witness) = rep.witness {
            found = Some(Counterexample {
                issues: profile.agenda().issues().iter().map(|f| f.to_string()).collect(),
                blocks: d.blocks().to_vec(),
                profile: profile.members().to_vec(),
                witness,
            });
        }
    }

    Ok(SuiteReport {
        config: config.clone(),
        partition_instances: partitions.len(),
        iod_instances: iods.len(),
        properties,
        rev_oas_hunt: RevHunt { trials, found },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agenda::js;
    use crate::rules::{FnScore, MedianScore, ReversalScore, Score};

    fn f1_split() -> (Profile, Decomposition) {
        let p = fixtures::f1();
        let d = Decomposition::certify_partition(p.agenda(), fixtures::blocks(&fixtures::F1_BLOCKS)).unwrap();
        (p, d)
    }

    fn f2_split() -> (Profile, Decomposition) {
        let p = fixtures::f2();
        let d = Decomposition::certify_iod(p.agenda(), fixtures::F2_BLOCKS[0], fixtures::F2_BLOCKS[1]).unwrap();
        (p, d)
    }

    #[test]
    fn rmax_violates_as_on_figure_one() {
        let (p, d) = f1_split();
        let rep = check_as_instance(&RuleId::Rmax, &p, &d).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        let w = rep.witness.unwrap();
        assert_eq!(w.direct, vec![js("-+-+")]);
        assert_eq!(w.recombined.len(), 6);
        assert_eq!(check_as_instance(&RuleId::Med, &p, &d).unwrap().verdict, Verdict::Holds);
        let trivial = Decomposition::trivial(4);
        for rule in RuleId::NAMED {
            assert_eq!(check_as_instance(&rule, &p, &trivial).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn oas_on_figure_two() {
        let (p, d) = f2_split();
        for rule in [RuleId::Mcc, RuleId::Med, RuleId::FullH] {
            let rep = check_oas_instance(&rule, &p, &d).unwrap();
            assert_eq!(rep.verdict, Verdict::Violated, "{rule}");
            let w = rep.witness.unwrap();
            assert_eq!(w.recombined, vec![js("-++---++")]);
            assert_eq!(w.direct.len(), 2);
        }
        let rep = check_oas_instance(&RuleId::Mc, &p, &d).unwrap();
        assert_eq!(rep.verdict, Verdict::PremiseNotSatisfied);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn scoring_separability() {
        let (p, d) = f1_split();
        let a = p.agenda();
        assert!(check_scoring_separability(&MedianScore, a, &d).unwrap());
        assert!(check_scoring_separability(&ReversalScore, a, &d).unwrap());
        let positives = FnScore::new("positives", |_: &Agenda, j: &JudgmentSet, _, _| {
            Score::from_integer(j.signs().iter().filter(|s| **s == Sign::Plus).count() as u64)
        });
        assert!(!check_scoring_separability(&positives, a, &d).unwrap());
    }

    #[test]
    fn random_profiles_are_reproducible() {
        let a = Arc::new(fixtures::pref3());
        let p1 = random_profile(a.clone(), 7, 42).unwrap();
        assert_eq!(p1.members(), random_profile(a.clone(), 7, 42).unwrap().members());
        assert_eq!(random_profile(a.clone(), 1, 3).unwrap().n(), 1);
        assert!(random_profile(a, 0, 3).is_err());
    }

    #[test]
    fn generated_agendas() {
        for seed in 0..20 {
            let (a, d) = random_decomposable_agenda(2, 2, seed).unwrap();
            assert_eq!(d.blocks().len(), 2);
            let solver = a.solver();
            for f in a.issues() {
                assert!(!logic::is_tautology(f, &Formula::True, &solver).unwrap());
            }
            let (_, d) = random_decomposable_agenda(1, 2, seed).unwrap();
            assert!(d.is_trivial());
            let (a, d) = random_iod_agenda(seed).unwrap();
            assert!(crate::decomposition::is_iod(&a, &d.blocks()[0], &d.blocks()[1]).unwrap());
        }
    }

    #[test]
    fn small_suite_passes() {
        let config = SuiteConfig { trials: 15, rev_oas_budget: 10, ..SuiteConfig::default() };
        let report = run_property_suite(&config).unwrap();
        for o in &report.properties {
            assert!(o.passed(), "{} {:?}", o.name, o.notes);
        }
    }
}
