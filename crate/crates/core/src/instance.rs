//! Objects, labels, feature value tables, feature lattices, and training sets
//! over a finite object pool.
//!
//! Features are extensional: a feature is a total table of exact rational
//! values over the pool, not a symbolic function. All types are immutable
//! after validation and safe to share across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Identifier of an object in the pool.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(String);

impl ObjectId {
    pub fn new(id: impl Into<String>) -> Self {
        ObjectId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a teachable feature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureId(String);

impl FeatureId {
    pub fn new(id: impl Into<String>) -> Self {
        FeatureId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Binary classification label. The ordering (`Zero < One`) is what the
/// 1NN tie rule relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_u8(v: u8) -> Result<Label> {
        match v {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(Error::MalformedDocument(format!("label must be 0 or 1, got {other}"))),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A finite set of feature identifiers. Iteration order is the canonical
/// coordinate order: lexicographic on the identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureSet(BTreeSet<FeatureId>);

impl FeatureSet {
    pub fn empty() -> Self {
        FeatureSet(BTreeSet::new())
    }

    pub fn from_ids<I: IntoIterator<Item = FeatureId>>(ids: I) -> Self {
        FeatureSet(ids.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, f: &FeatureId) -> bool {
        self.0.contains(f)
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, f: FeatureId) -> FeatureSet {
        let mut s = self.0.clone();
        s.insert(f);
        FeatureSet(s)
    }

    pub fn without(&self, f: &FeatureId) -> FeatureSet {
        let mut s = self.0.clone();
        s.remove(f);
        FeatureSet(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FeatureId> {
        self.0.iter()
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

/// The family of teachable feature sets, closed under single-feature chain
/// predecessors. Stored extensionally in canonical (size, lexicographic)
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLattice {
    sets: Vec<FeatureSet>,
}

impl FeatureLattice {
    /// Build a lattice from member sets, checking the chain condition:
    /// every non-empty member has a member predecessor one feature smaller.
    pub fn new(mut sets: Vec<FeatureSet>) -> Result<Self> {
        sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        for pair in sets.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::MalformedDocument(format!("duplicate lattice set {}", pair[0])));
            }
        }
        if sets.is_empty() || !sets[0].is_empty() {
            return Err(Error::MalformedDocument(
                "lattice must include the empty feature set".to_string(),
            ));
        }
        let members: BTreeSet<&FeatureSet> = sets.iter().collect();
        for fs in &sets {
            if fs.is_empty() {
                continue;
            }
            let has_predecessor = fs
                .iter()
                .any(|f| members.contains(&fs.without(f)));
            if !has_predecessor {
                return Err(Error::LatticeChainViolation(fs.clone()));
            }
        }
        Ok(FeatureLattice { sets })
    }

    pub fn sets(&self) -> &[FeatureSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, fs: &FeatureSet) -> bool {
        self.sets.iter().any(|s| s == fs)
    }

    pub fn position(&self, fs: &FeatureSet) -> Option<usize> {
        self.sets.iter().position(|s| s == fs)
    }
}

/// A point in feature space: one exact rational coordinate per feature of
/// the featurizing set, in canonical feature order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeaturizedPoint {
    coords: Vec<Rational>,
}

impl FeaturizedPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        FeaturizedPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Exact squared Euclidean distance.
    pub fn sq_dist(&self, other: &FeaturizedPoint) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = crate::rational::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let d = a - b;
            acc += &d * &d;
        }
        acc
    }
}

/// An honest labeled subset of the pool. Duplicate object ids are
/// unrepresentable; honesty is checked against an [`Instance`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainingSet {
    examples: BTreeMap<ObjectId, Label>,
}

impl TrainingSet {
    pub fn empty() -> Self {
        TrainingSet::default()
    }

    /// Collect explicit (object, label) pairs, rejecting duplicate ids.
    pub fn from_pairs<I: IntoIterator<Item = (ObjectId, Label)>>(pairs: I) -> Result<Self> {
        let mut examples = BTreeMap::new();
        for (x, y) in pairs {
            if examples.insert(x.clone(), y).is_some() {
                return Err(Error::DuplicateObjectId(x));
            }
        }
        Ok(TrainingSet { examples })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn contains(&self, x: &ObjectId) -> bool {
        self.examples.contains_key(x)
    }

    pub fn insert(&mut self, x: ObjectId, y: Label) -> Result<()> {
        if self.examples.contains_key(&x) {
            return Err(Error::DuplicateObjectId(x));
        }
        self.examples.insert(x, y);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ObjectId, Label)> {
        self.examples.iter().map(|(x, y)| (x, *y))
    }
}

impl fmt::Display for TrainingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.examples.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

/// A validated teaching problem: finite object pool, target labels, feature
/// value tables, and the lattice of teachable feature sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    objects: Vec<ObjectId>,
    index: BTreeMap<ObjectId, usize>,
    target: Vec<Label>,
    features: BTreeMap<FeatureId, Vec<Rational>>,
    lattice: FeatureLattice,
}

impl Instance {
    /// Assemble and validate an instance from its raw parts.
    ///
    /// `feature_values` maps each feature to a (total) value table keyed by
    /// object id; `lattice_sets` lists the lattice members.
    pub fn new(
        objects: Vec<(ObjectId, Label)>,
        feature_values: Vec<(FeatureId, BTreeMap<ObjectId, Rational>)>,
        lattice_sets: Vec<FeatureSet>,
    ) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::MalformedDocument("instance declares no objects".to_string()));
        }
        let mut index = BTreeMap::new();
        let mut ids = Vec::with_capacity(objects.len());
        let mut target = Vec::with_capacity(objects.len());
        for (i, (id, label)) in objects.into_iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateObjectId(id));
            }
            ids.push(id);
            target.push(label);
        }

        let mut features: BTreeMap<FeatureId, Vec<Rational>> = BTreeMap::new();
        for (fid, table) in feature_values {
            if features.contains_key(&fid) {
                return Err(Error::MalformedDocument(format!("duplicate feature id {fid}")));
            }
            for obj in table.keys() {
                if !index.contains_key(obj) {
                    return Err(Error::UnknownObject(obj.clone()));
                }
            }
            let mut row = Vec::with_capacity(ids.len());
            for obj in &ids {
                match table.get(obj) {
                    Some(v) => row.push(v.clone()),
                    None => {
                        return Err(Error::MissingFeatureValue { feature: fid, object: obj.clone() })
                    }
                }
            }
            features.insert(fid, row);
        }

        let lattice = FeatureLattice::new(lattice_sets)?;
        for fs in lattice.sets() {
            for f in fs.iter() {
                if !features.contains_key(f) {
                    return Err(Error::UnknownFeature(f.clone()));
                }
            }
        }

        Ok(Instance { objects: ids, index, target, features, lattice })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    /// Object indices sorted by lexicographic object id; the canonical
    /// enumeration order for searches and tie-breaking.
    pub fn objects_by_id(&self) -> Vec<usize> {
        self.index.values().copied().collect()
    }

    pub fn object_index(&self, x: &ObjectId) -> Result<usize> {
        self.index.get(x).copied().ok_or_else(|| Error::UnknownObject(x.clone()))
    }

    pub fn target(&self, x: &ObjectId) -> Result<Label> {
        Ok(self.target[self.object_index(x)?])
    }

    pub fn target_ix(&self, ix: usize) -> Label {
        self.target[ix]
    }

    pub fn feature_ids(&self) -> impl Iterator<Item = &FeatureId> {
        self.features.keys()
    }

    pub fn has_feature(&self, f: &FeatureId) -> bool {
        self.features.contains_key(f)
    }

    pub fn lattice(&self) -> &FeatureLattice {
        &self.lattice
    }

    pub fn both_labels_present(&self) -> bool {
        self.target.contains(&Label::Zero) && self.target.contains(&Label::One)
    }

    pub fn target_has_positive(&self) -> bool {
        self.target.contains(&Label::One)
    }

    /// Map an object to its coordinate vector under `fs` (canonical feature
    /// order). `fs` may be any subset of the declared features; it does not
    /// need to be a lattice member.
    pub fn featurize(&self, fs: &FeatureSet, x: &ObjectId) -> Result<FeaturizedPoint> {
        let ix = self.object_index(x)?;
        self.featurize_ix(fs, ix)
    }

    pub fn featurize_ix(&self, fs: &FeatureSet, ix: usize) -> Result<FeaturizedPoint> {
        let mut coords = Vec::with_capacity(fs.len());
        for f in fs.iter() {
            let row = self.features.get(f).ok_or_else(|| Error::UnknownFeature(f.clone()))?;
            coords.push(row[ix].clone());
        }
        Ok(FeaturizedPoint::new(coords))
    }

    /// Featurize the whole pool once, in pool order.
    pub fn featurize_pool(&self, fs: &FeatureSet) -> Result<Vec<FeaturizedPoint>> {
        (0..self.len()).map(|ix| self.featurize_ix(fs, ix)).collect()
    }

    /// The features `f` with `fs ∪ {f}` in the lattice: the choice set a
    /// teacher picks from when adding a feature.
    pub fn successor_features(&self, fs: &FeatureSet) -> Result<BTreeSet<FeatureId>> {
        if !self.lattice.contains(fs) {
            return Err(Error::FeatureSetNotInLattice(fs.clone()));
        }
        let mut out = BTreeSet::new();
        for f in self.features.keys() {
            if !fs.contains(f) && self.lattice.contains(&fs.with(f.clone())) {
                out.insert(f.clone());
            }
        }
        Ok(out)
    }

    /// True iff every example label matches the target.
    pub fn is_honest(&self, t: &TrainingSet) -> Result<bool> {
        for (x, y) in t.iter() {
            if self.target(x)? != y {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The honest training set over the given object indices.
    pub fn honest_training_set(&self, ixs: &[usize]) -> TrainingSet {
        let pairs = ixs.iter().map(|&ix| (self.objects[ix].clone(), self.target[ix]));
        TrainingSet::from_pairs(pairs).expect("pool indices are unique")
    }

    /// Extract a full chain `∅ = F_0 ⊂ F_1 ⊂ … ⊂ F_k = fs` inside the
    /// lattice, walking lexicographically-least immediate predecessors.
    /// The chain condition guarantees one exists for every member.
    pub fn chain_to(&self, fs: &FeatureSet) -> Result<Vec<FeatureSet>> {
        if !self.lattice.contains(fs) {
            return Err(Error::FeatureSetNotInLattice(fs.clone()));
        }
        let mut chain = vec![fs.clone()];
        let mut cur = fs.clone();
        while !cur.is_empty() {
            let pred = cur
                .iter()
                .map(|f| cur.without(f))
                .find(|p| self.lattice.contains(p))
                .ok_or_else(|| Error::LatticeChainViolation(cur.clone()))?;
            chain.push(pred.clone());
            cur = pred;
        }
        chain.reverse();
        Ok(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn fid(s: &str) -> FeatureId {
        FeatureId::new(s)
    }

    fn oid(s: &str) -> ObjectId {
        ObjectId::new(s)
    }

    /// Four objects on a line at 1,2,3,4 with a threshold target (0,0,1,1).
    fn thresh4() -> Instance {
        let objects = vec![
            (oid("x1"), Label::Zero),
            (oid("x2"), Label::Zero),
            (oid("x3"), Label::One),
            (oid("x4"), Label::One),
        ];
        let values: BTreeMap<ObjectId, Rational> =
            [(oid("x1"), int(1)), (oid("x2"), int(2)), (oid("x3"), int(3)), (oid("x4"), int(4))]
                .into_iter()
                .collect();
        Instance::new(
            objects,
            vec![(fid("f1"), values)],
            vec![FeatureSet::empty(), FeatureSet::from_ids([fid("f1")])],
        )
        .unwrap()
    }

    #[test]
    fn minimal_instance_validates() {
        let inst = thresh4();
        assert_eq!(inst.len(), 4);
        assert_eq!(inst.lattice().len(), 2);
    }

    #[test]
    fn chain_violation_is_reported() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let values: BTreeMap<ObjectId, Rational> = [(oid("x1"), int(0))].into_iter().collect();
        let err = Instance::new(
            objects,
            vec![(fid("f1"), values.clone()), (fid("f2"), values)],
            vec![FeatureSet::empty(), FeatureSet::from_ids([fid("f1"), fid("f2")])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::LatticeChainViolation(fs) if fs.len() == 2));
    }

    #[test]
    fn missing_feature_value_is_reported() {
        let objects = vec![
            (oid("x1"), Label::Zero),
            (oid("x2"), Label::Zero),
            (oid("x3"), Label::One),
        ];
        let values: BTreeMap<ObjectId, Rational> =
            [(oid("x1"), int(1)), (oid("x2"), int(2))].into_iter().collect();
        let err = Instance::new(
            objects,
            vec![(fid("f1"), values)],
            vec![FeatureSet::empty(), FeatureSet::from_ids([fid("f1")])],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::MissingFeatureValue { feature, object } if feature == fid("f1") && object == oid("x3")
        ));
    }

    #[test]
    fn duplicate_object_id_is_reported() {
        let objects = vec![(oid("x1"), Label::Zero), (oid("x1"), Label::One)];
        let err = Instance::new(objects, vec![], vec![FeatureSet::empty()]).unwrap_err();
        assert!(matches!(err, Error::DuplicateObjectId(id) if id == oid("x1")));
    }

    #[test]
    fn lattice_referencing_unknown_feature_is_rejected() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let err = Instance::new(
            objects,
            vec![],
            vec![FeatureSet::empty(), FeatureSet::from_ids([fid("f9")])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownFeature(f) if f == fid("f9")));
    }

    #[test]
    fn lattice_must_contain_empty_set() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let values: BTreeMap<ObjectId, Rational> = [(oid("x1"), int(0))].into_iter().collect();
        let err = Instance::new(
            objects,
            vec![(fid("f1"), values)],
            vec![FeatureSet::from_ids([fid("f1")])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedDocument(_)));
    }

    #[test]
    fn featurize_is_a_table_lookup() {
        let inst = thresh4();
        let f1 = FeatureSet::from_ids([fid("f1")]);
        let pt = inst.featurize(&f1, &oid("x3")).unwrap();
        assert_eq!(pt.coords(), &[int(3)]);
    }

    #[test]
    fn empty_feature_set_maps_all_objects_to_one_point() {
        let inst = thresh4();
        let empty = FeatureSet::empty();
        let p1 = inst.featurize(&empty, &oid("x1")).unwrap();
        let p4 = inst.featurize(&empty, &oid("x4")).unwrap();
        assert_eq!(p1.dim(), 0);
        assert_eq!(p1, p4);
    }

    #[test]
    fn featurize_orders_coordinates_canonically() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let va: BTreeMap<ObjectId, Rational> = [(oid("x1"), int(1))].into_iter().collect();
        let vb: BTreeMap<ObjectId, Rational> = [(oid("x1"), ratio(1, 2))].into_iter().collect();
        // Declare f2 before f1: coordinates still come out sorted by id.
        let inst = Instance::new(
            objects,
            vec![(fid("f2"), vb), (fid("f1"), va)],
            vec![
                FeatureSet::empty(),
                FeatureSet::from_ids([fid("f1")]),
                FeatureSet::from_ids([fid("f1"), fid("f2")]),
            ],
        )
        .unwrap();
        let pt = inst
            .featurize(&FeatureSet::from_ids([fid("f1"), fid("f2")]), &oid("x1"))
            .unwrap();
        assert_eq!(pt.coords(), &[int(1), ratio(1, 2)]);
    }

    #[test]
    fn featurize_unknown_object_or_feature() {
        let inst = thresh4();
        let f1 = FeatureSet::from_ids([fid("f1")]);
        assert!(matches!(inst.featurize(&f1, &oid("zz")), Err(Error::UnknownObject(_))));
        let f9 = FeatureSet::from_ids([fid("f9")]);
        assert!(matches!(inst.featurize(&f9, &oid("x1")), Err(Error::UnknownFeature(_))));
    }

    #[test]
    fn successor_features_follow_the_lattice() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let v: BTreeMap<ObjectId, Rational> = [(oid("x1"), int(0))].into_iter().collect();
        let inst = Instance::new(
            objects,
            vec![(fid("f1"), v.clone()), (fid("f2"), v)],
            vec![
                FeatureSet::empty(),
                FeatureSet::from_ids([fid("f1")]),
                FeatureSet::from_ids([fid("f2")]),
                FeatureSet::from_ids([fid("f1"), fid("f2")]),
            ],
        )
        .unwrap();
        let at_empty = inst.successor_features(&FeatureSet::empty()).unwrap();
        assert_eq!(at_empty, BTreeSet::from([fid("f1"), fid("f2")]));
        let at_f1 = inst.successor_features(&FeatureSet::from_ids([fid("f1")])).unwrap();
        assert_eq!(at_f1, BTreeSet::from([fid("f2")]));

        let thresh = thresh4();
        let at_top = thresh.successor_features(&FeatureSet::from_ids([fid("f1")])).unwrap();
        assert!(at_top.is_empty());
        assert!(matches!(
            thresh.successor_features(&FeatureSet::from_ids([fid("f9")])),
            Err(Error::FeatureSetNotInLattice(_))
        ));
    }

    #[test]
    fn honesty_checks_against_target() {
        let inst = thresh4();
        let honest = TrainingSet::from_pairs([(oid("x1"), Label::Zero)]).unwrap();
        assert!(inst.is_honest(&honest).unwrap());
        let dishonest = TrainingSet::from_pairs([(oid("x1"), Label::One)]).unwrap();
        assert!(!inst.is_honest(&dishonest).unwrap());
        assert!(inst.is_honest(&TrainingSet::empty()).unwrap());
        let unknown = TrainingSet::from_pairs([(oid("zz"), Label::Zero)]).unwrap();
        assert!(matches!(inst.is_honest(&unknown), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn training_set_rejects_duplicates() {
        let err = TrainingSet::from_pairs([(oid("x1"), Label::Zero), (oid("x1"), Label::Zero)])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateObjectId(_)));
    }

    #[test]
    fn chain_extraction_reaches_the_empty_set() {
        let objects = vec![(oid("x1"), Label::Zero)];
        let v: BTreeMap<ObjectId, Rational> = [(oid("x1"), int(0))].into_iter().collect();
        let inst = Instance::new(
            objects,
            vec![(fid("f1"), v.clone()), (fid("f2"), v.clone()), (fid("f3"), v)],
            vec![
                FeatureSet::empty(),
                FeatureSet::from_ids([fid("f2")]),
                FeatureSet::from_ids([fid("f2"), fid("f3")]),
                FeatureSet::from_ids([fid("f1"), fid("f2"), fid("f3")]),
            ],
        )
        .unwrap();
        let top = FeatureSet::from_ids([fid("f1"), fid("f2"), fid("f3")]);
        let chain = inst.chain_to(&top).unwrap();
        assert_eq!(chain.len(), 4);
        assert!(chain[0].is_empty());
        assert_eq!(chain[3], top);
        for w in chain.windows(2) {
            assert!(w[0].is_subset(&w[1]));
            assert_eq!(w[0].len() + 1, w[1].len());
            assert!(inst.lattice().contains(&w[0]));
        }
    }
}
