//! Instance generators: seeded random pools, bound-tightness constructions
//! certified at build time, and a few small canned instances.
//!
//! Generators are deterministic in their parameters: identical params and
//! seed produce identical instance documents. No construction trusts
//! itself — every certified instance is re-validated and its defining
//! property re-established by the brute-force searches before it is
//! returned.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costs::{is_sufficient, min_concept_teaching_set, min_invalidation_set, SearchBudget};
use crate::error::{Error, Result};
use crate::instance::{FeatureId, FeatureSet, Instance, Label, ObjectId};
use crate::learners::{strict_separability, LearnerKind};
use crate::rational::{dot, int, ratio, Rational};

/// How a random instance gets its target labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Labels come from a random hyperplane through the point cloud, so the
    /// full feature set is linearly sufficient by construction (both labels
    /// are present whenever the pool has two distinct points).
    Separable,
    /// Uniform random labels; optionally force both labels to appear.
    General { force_both_labels: bool },
}

/// Shape of the generated feature lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// The single chain ∅ ⊂ {f1} ⊂ {f1,f2} ⊂ … in canonical feature order.
    Chain,
    /// Every subset of the feature set.
    PowerSet,
}

/// Parameters for [`generate_random_instance`]. Coordinates are drawn on a
/// bounded rational grid: numerators in `[-max_numer, max_numer]`,
/// denominators in `[1, max_denom]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub dim: usize,
    pub pool: usize,
    pub max_numer: i64,
    pub max_denom: u32,
    pub seed: u64,
    pub labels: LabelMode,
    pub lattice: LatticeKind,
}

impl GeneratorParams {
    pub fn new(dim: usize, pool: usize, seed: u64, labels: LabelMode, lattice: LatticeKind) -> Self {
        GeneratorParams { dim, pool, max_numer: 8, max_denom: 4, seed, labels, lattice }
    }

    fn validate(&self) -> Result<()> {
        if self.pool == 0 || self.pool > 64 {
            return Err(Error::InvalidParams(format!("pool size must be in 1..=64, got {}", self.pool)));
        }
        if self.max_numer < 1 || self.max_denom < 1 || self.max_denom > 64 {
            return Err(Error::InvalidParams(
                "coordinate range needs max_numer >= 1 and max_denom in 1..=64".to_string(),
            ));
        }
        if self.lattice == LatticeKind::PowerSet && self.dim > 6 {
            return Err(Error::InvalidParams(format!(
                "power-set lattices are capped at 6 features, got {}",
                self.dim
            )));
        }
        Ok(())
    }
}

fn object_ids(n: usize) -> Vec<ObjectId> {
    let width = n.to_string().len();
    (1..=n).map(|i| ObjectId::new(format!("x{i:0width$}"))).collect()
}

fn feature_ids(d: usize) -> Vec<FeatureId> {
    (1..=d).map(|j| FeatureId::new(format!("f{j}"))).collect()
}

fn lattice_sets(features: &[FeatureId], kind: LatticeKind) -> Vec<FeatureSet> {
    match kind {
        LatticeKind::Chain => {
            let mut sets = vec![FeatureSet::empty()];
            let mut cur = FeatureSet::empty();
            for f in features {
                cur = cur.with(f.clone());
                sets.push(cur.clone());
            }
            sets
        }
        LatticeKind::PowerSet => {
            let d = features.len();
            (0u32..(1 << d))
                .map(|mask| {
                    FeatureSet::from_ids(
                        features
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| mask & (1 << j) != 0)
                            .map(|(_, f)| f.clone()),
                    )
                })
                .collect()
        }
    }
}

fn assemble(
    objects: Vec<(ObjectId, Label)>,
    features: &[FeatureId],
    coords: &[Vec<Rational>],
    lattice: Vec<FeatureSet>,
) -> Result<Instance> {
    let ids: Vec<ObjectId> = objects.iter().map(|(id, _)| id.clone()).collect();
    let tables = features
        .iter()
        .enumerate()
        .map(|(j, fid)| {
            let table: BTreeMap<ObjectId, Rational> = ids
                .iter()
                .zip(coords)
                .map(|(id, row)| (id.clone(), row[j].clone()))
                .collect();
            (fid.clone(), table)
        })
        .collect();
    Instance::new(objects, tables, lattice)
}

/// Generate a seeded random instance. Deterministic: identical parameters
/// yield the identical instance.
pub fn generate_random_instance(params: &GeneratorParams) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let ids = object_ids(params.pool);
    let features = feature_ids(params.dim);

    let coords: Vec<Vec<Rational>> = (0..params.pool)
        .map(|_| {
            (0..params.dim)
                .map(|_| {
                    let numer = rng.gen_range(-params.max_numer..=params.max_numer);
                    let denom = rng.gen_range(1..=params.max_denom);
                    ratio(numer, denom as i64)
                })
                .collect()
        })
        .collect();

    let labels: Vec<Label> = match params.labels {
        LabelMode::Separable => {
            // Hyperplane through the midpoint of the first pair of distinct
            // points; its two endpoints land on opposite sides, so both
            // labels appear whenever the cloud is not a single point.
            let distinct = (1..params.pool).find(|&i| coords[i] != coords[0]);
            match distinct {
                None => vec![Label::Zero; params.pool],
                Some(z) => {
                    let w: Vec<Rational> =
                        coords[z].iter().zip(&coords[0]).map(|(a, b)| a - b).collect();
                    let mid: Vec<Rational> = coords[z]
                        .iter()
                        .zip(&coords[0])
                        .map(|(a, b)| (a + b) / int(2))
                        .collect();
                    let b = -dot(&w, &mid);
                    coords
                        .iter()
                        .map(|x| {
                            if dot(&w, x) + &b > crate::rational::zero() {
                                Label::One
                            } else {
                                Label::Zero
                            }
                        })
                        .collect()
                }
            }
        }
        LabelMode::General { force_both_labels } => {
            let mut labels: Vec<Label> = (0..params.pool)
                .map(|_| if rng.gen_range(0..2u8) == 1 { Label::One } else { Label::Zero })
                .collect();
            if force_both_labels && params.pool >= 2 {
                let first = labels[0];
                if labels.iter().all(|&l| l == first) {
                    let last = labels.len() - 1;
                    labels[last] = if first == Label::Zero { Label::One } else { Label::Zero };
                }
            }
            labels
        }
    };

    let objects: Vec<(ObjectId, Label)> = ids.into_iter().zip(labels).collect();
    let lattice = lattice_sets(&features, params.lattice);
    assemble(objects, &features, &coords, lattice)
}

/// An instance together with the build-time certificate of its defining
/// property.
#[derive(Debug, Clone)]
pub struct CertifiedInstance {
    pub instance: Instance,
    pub certificate: Vec<String>,
}

fn full_chain_instance(
    labels: &[Label],
    coords: &[Vec<Rational>],
    dim: usize,
) -> Result<Instance> {
    let ids = object_ids(labels.len());
    let features = feature_ids(dim);
    let objects: Vec<(ObjectId, Label)> = ids.into_iter().zip(labels.iter().copied()).collect();
    let lattice = lattice_sets(&features, LatticeKind::Chain);
    assemble(objects, &features, coords, lattice)
}

/// A `d`-feature instance whose minimal linear concept teaching set has
/// size exactly `d + 1`: one positive at the origin against the `d` unit
/// basis points. Omitting any basis point leaves it on the wrong side of
/// the retrained bisector, and omitting the positive forces a constant.
///
/// Rejects `d < 2`: in one dimension the bound is already attained by a
/// two-point threshold pool, so no dedicated construction is needed.
pub fn generate_concept_spec_tightness(d: usize) -> Result<CertifiedInstance> {
    if d < 2 {
        return Err(Error::InvalidParams(
            "concept-tightness construction needs d >= 2 (a 1-d threshold pool already attains 2)"
                .to_string(),
        ));
    }
    let mut labels = vec![Label::One];
    let mut coords = vec![vec![int(0); d]];
    for j in 0..d {
        labels.push(Label::Zero);
        let mut e = vec![int(0); d];
        e[j] = int(1);
        coords.push(e);
    }
    let instance = full_chain_instance(&labels, &coords, d)?;

    let top = instance.lattice().sets().last().unwrap().clone();
    let t = min_concept_teaching_set(&instance, &top, LearnerKind::Linear, &SearchBudget::default())?
        .ok_or_else(|| Error::ConstructionFailed("tightness pool is not linearly sufficient".into()))?;
    if t.len() != d + 1 {
        return Err(Error::ConstructionFailed(format!(
            "expected concept specification cost {}, search found {}",
            d + 1,
            t.len()
        )));
    }
    Ok(CertifiedInstance {
        instance,
        certificate: vec![format!(
            "linear concept specification cost at {top} is exactly {} (= d+1)",
            d + 1
        )],
    })
}

/// `d + 2` alternately labeled points on the moment curve
/// `t ↦ (t, t², …, t^d)`: every proper subset is strictly separable (a
/// degree-`d` polynomial can realize up to `d` sign changes) while the full
/// set is not, so the minimal invalidation set is the whole pool.
pub fn generate_invalidation_tightness(d: usize) -> Result<CertifiedInstance> {
    if d < 1 {
        return Err(Error::InvalidParams("invalidation-tightness construction needs d >= 1".to_string()));
    }
    let n = d + 2;
    let labels: Vec<Label> =
        (0..n).map(|i| if i % 2 == 0 { Label::Zero } else { Label::One }).collect();
    let coords: Vec<Vec<Rational>> = (1..=n as i64)
        .map(|t| (1..=d as u32).map(|j| int(t.pow(j))).collect())
        .collect();
    let instance = full_chain_instance(&labels, &coords, d)?;

    let top = instance.lattice().sets().last().unwrap().clone();
    if is_sufficient(&instance, &top, LearnerKind::Linear)? {
        return Err(Error::ConstructionFailed("full moment-curve pool is separable".into()));
    }
    let t = min_invalidation_set(&instance, &top, LearnerKind::Linear, &SearchBudget::default())?
        .ok_or_else(|| Error::ConstructionFailed("no invalidation set found".into()))?;
    if t.len() != n {
        return Err(Error::ConstructionFailed(format!(
            "expected invalidation cost {n}, search found {}",
            t.len()
        )));
    }
    // Re-establish subset separability from scratch.
    let points = instance.featurize_pool(&top)?;
    for mask in 0u32..(1 << n) {
        if mask == (1 << n) - 1 {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, pt) in points.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match labels[i] {
                    Label::One => pos.push(pt.clone()),
                    Label::Zero => neg.push(pt.clone()),
                }
            }
        }
        if strict_separability(&pos, &neg, d)?.is_none() {
            return Err(Error::ConstructionFailed(format!(
                "proper subset {mask:#b} is not strictly separable"
            )));
        }
    }
    Ok(CertifiedInstance {
        instance,
        certificate: vec![
            format!("linear invalidation cost at {top} is exactly {n} (= d+2)"),
            "every proper subset of the pool is strictly separable".to_string(),
        ],
    })
}

/// The 1NN cost-explosion family: `k` point pairs on the lattice
/// ∅ ⊂ {f1} ⊂ {f1,f2}. Under `{f1}` the classes sit at 0 and 1 and two
/// labels teach; adding the interleaving-height feature `f2` pushes every
/// object's nearest neighbors into the opposite class, so teaching then
/// needs the entire pool of `2k` objects.
pub fn generate_1nn_explosion(k: usize) -> Result<CertifiedInstance> {
    if k < 2 {
        return Err(Error::InvalidParams("explosion construction needs k >= 2 pairs".to_string()));
    }
    if 2 * k > 64 {
        return Err(Error::InvalidParams("explosion construction is capped at 32 pairs".to_string()));
    }
    let mut labels = Vec::with_capacity(2 * k);
    let mut coords = Vec::with_capacity(2 * k);
    for i in 1..=k as i64 {
        labels.push(Label::Zero);
        coords.push(vec![int(0), int(2 * i)]);
        labels.push(Label::One);
        coords.push(vec![int(1), int(2 * i + 1)]);
    }
    let instance = full_chain_instance(&labels, &coords, 2)?;

    let f1_set = instance.lattice().sets()[1].clone();
    let top = instance.lattice().sets().last().unwrap().clone();
    let budget = SearchBudget::default();
    let small = min_concept_teaching_set(&instance, &f1_set, LearnerKind::OneNn, &budget)?
        .ok_or_else(|| Error::ConstructionFailed("{f1} is not 1NN-sufficient".into()))?;
    let large = min_concept_teaching_set(&instance, &top, LearnerKind::OneNn, &budget)?
        .ok_or_else(|| Error::ConstructionFailed("top set is not 1NN-sufficient".into()))?;
    if small.len() != 2 || large.len() != 2 * k {
        return Err(Error::ConstructionFailed(format!(
            "expected 1NN concept specification costs 2 and {}, search found {} and {}",
            2 * k,
            small.len(),
            large.len()
        )));
    }
    Ok(CertifiedInstance {
        instance,
        certificate: vec![format!(
            "1nn concept specification cost is 2 at {f1_set} and {} at {top}",
            2 * k
        )],
    })
}

/// Four objects on a line at 1, 2, 3, 4 with the threshold target
/// (0, 0, 1, 1) and lattice ∅ ⊂ {f1}.
pub fn thresh4() -> Instance {
    let labels = [Label::Zero, Label::Zero, Label::One, Label::One];
    let objects: Vec<(ObjectId, Label)> = (1..=4)
        .map(|i| (ObjectId::new(format!("x{i}")), labels[i - 1]))
        .collect();
    let features = feature_ids(1);
    let coords: Vec<Vec<Rational>> = (1..=4).map(|v| vec![int(v)]).collect();
    assemble(objects, &features, &coords, lattice_sets(&features, LatticeKind::Chain))
        .expect("canned instance is valid")
}

/// The 2-d parity square over the power-set lattice: objects at the four
/// corners, labeled by xor of the coordinates.
pub fn xor4() -> Instance {
    let corners = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let objects: Vec<(ObjectId, Label)> = corners
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let label = if (a + b) % 2 == 1 { Label::One } else { Label::Zero };
            (ObjectId::new(format!("x{}", i + 1)), label)
        })
        .collect();
    let features = feature_ids(2);
    let coords: Vec<Vec<Rational>> = corners.iter().map(|(a, b)| vec![int(*a), int(*b)]).collect();
    assemble(objects, &features, &coords, lattice_sets(&features, LatticeKind::PowerSet))
        .expect("canned instance is valid")
}

/// Two objects with equal feature value and different labels: the minimal
/// 1NN collision witness, on the lattice ∅ ⊂ {f1}.
pub fn collision_pair() -> Instance {
    let objects = vec![
        (ObjectId::new("x1"), Label::Zero),
        (ObjectId::new("x2"), Label::One),
    ];
    let features = feature_ids(1);
    let coords = vec![vec![int(1)], vec![int(1)]];
    assemble(objects, &features, &coords, lattice_sets(&features, LatticeKind::Chain))
        .expect("canned instance is valid")
}
