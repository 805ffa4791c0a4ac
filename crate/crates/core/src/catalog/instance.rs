use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::semantics::{eval, Assignment, Compiled, ElemSet, EvalError, Structure};
use crate::syntax::{
    enumerate_binary_family, enumerate_family, fresh_name, stratified, Constant, Formula,
    FormulaFamily, Term,
};

use super::checks;
use super::config::{
    Comprehension, Eventuality, Extensionality, Fundamental, ImageAxiom, NormalityCondition,
    SystemConfig,
};
use super::CatalogError;

/// Which axiom schema an instance comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Comprehension(Comprehension),
    /// `stratified(A) -> Normal({x|A})`.
    StratifiedNormal,
    Extensionality(Extensionality),
    Fundamental(Fundamental),
    /// The image axiom; the flag marks the dropped `Normal(y)` filter.
    Image(ImageAxiom, bool),
    Eventuality(Eventuality),
    /// NC1..NC16, primed or not.
    Normality(u8, bool),
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaId::Comprehension(c) => write!(f, "CoS-{}", c.name()),
            SchemaId::StratifiedNormal => f.write_str("NC-stratified"),
            SchemaId::Extensionality(Extensionality::Ee) => f.write_str("EE"),
            SchemaId::Extensionality(Extensionality::Nee) => f.write_str("NEE"),
            SchemaId::Extensionality(Extensionality::None) => f.write_str("no-extensionality"),
            SchemaId::Fundamental(fa) => write!(f, "{fa:?}"),
            SchemaId::Image(ax, drop) => {
                write!(f, "FA4{}{}", ax.name(), if *drop { "-d" } else { "" })
            }
            SchemaId::Eventuality(ea) => f.write_str(ea.name()),
            SchemaId::Normality(i, primed) => write!(f, "NC{i}{}", if *primed { "'" } else { "" }),
        }
    }
}

impl Serialize for SchemaId {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// A check that is decided on the structure rather than by a closed formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetaCheck {
    /// A whole-structure condition (extensionality, EA1, EA3).
    Structure,
    /// A per-element condition.
    Element(usize),
    /// The image axiom at `element` for the relation defined by a
    /// two-variable formula over `x` (input) and `y` (output).
    Image { element: usize, relation: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Closed(Formula),
    Meta(MetaCheck),
}

/// One concrete axiom instance, with the formula it was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaInstance {
    pub schema: SchemaId,
    pub source: Option<Formula>,
    pub payload: Payload,
}

impl SchemaInstance {
    pub fn element(&self) -> Option<usize> {
        match &self.payload {
            Payload::Meta(MetaCheck::Element(e))
            | Payload::Meta(MetaCheck::Image { element: e, .. }) => Some(*e),
            _ => None,
        }
    }

    /// Whether evaluating needs the denotation table.
    pub fn needs_denotations(&self) -> bool {
        matches!(&self.payload, Payload::Closed(f) if f.has_builder())
    }

    pub fn holds(&self, s: &Structure, cfg: &SystemConfig) -> Result<bool, EvalError> {
        let check = match &self.payload {
            Payload::Closed(f) => return eval(s, cfg.philosophy, &Assignment::new(), f),
            Payload::Meta(m) => m,
        };
        Ok(match (self.schema, check) {
            (SchemaId::Extensionality(kind), _) => {
                checks::extensionality_holds(s, kind, cfg.philosophy)
            }
            (SchemaId::Eventuality(Eventuality::EA1), _) => checks::singleton_at_holds(s, cfg),
            (SchemaId::Eventuality(Eventuality::EA3), _) => checks::non_normal_equipollent(s),
            (SchemaId::Fundamental(Fundamental::FA2), MetaCheck::Element(e)) => {
                checks::powerset_holds(s, cfg, *e)
            }
            (SchemaId::Fundamental(Fundamental::FA3), MetaCheck::Element(e)) => {
                checks::union_holds(s, cfg, *e)
            }
            (SchemaId::Image(..), MetaCheck::Image { element, relation }) => {
                let rel = binary_relation(relation, s, cfg)?;
                checks::image_holds(s, cfg, *element, &rel)
            }
            (SchemaId::Eventuality(ea), MetaCheck::Element(e)) => {
                checks::eventuality_holds_at(s, cfg, ea, *e)
            }
            (SchemaId::Normality(id, _), MetaCheck::Element(e)) => {
                checks::nc_holds_at(s, cfg, id, *e)
            }
            _ => true,
        })
    }
}

impl fmt::Display for SchemaInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.schema)?;
        match &self.payload {
            Payload::Closed(g) => write!(f, ": {g}"),
            Payload::Meta(MetaCheck::Structure) => Ok(()),
            Payload::Meta(MetaCheck::Element(e)) => write!(f, " at {e}"),
            Payload::Meta(MetaCheck::Image { element, relation }) => {
                write!(f, " at {element} for {relation}")
            }
        }
    }
}

fn binary_relation(
    f: &Formula,
    s: &Structure,
    cfg: &SystemConfig,
) -> Result<Vec<ElemSet>, EvalError> {
    let c = Compiled::new(f, &["x".to_string(), "y".to_string()], Some(s))?;
    c.check_designations(s)?;
    Ok(c.relation(s, cfg.philosophy))
}

/// Whether an element with extension `ext` and flag `normal` can denote
/// `{x|A}` when `A` has truth set `truth`.
pub fn admits(
    variant: Comprehension,
    ext: ElemSet,
    normal: bool,
    truth: ElemSet,
    universe: ElemSet,
) -> bool {
    match variant {
        Comprehension::Naive => ext == truth,
        Comprehension::RaBaDi => ext == if normal { truth } else { universe },
        Comprehension::RinoBaCo => ext == if normal { truth } else { ElemSet::EMPTY },
        Comprehension::NoBI => !normal || ext == truth,
        Comprehension::NoBE => normal == (ext == truth),
    }
}

/// The variable `A` abstracts over: its free variable, or `x` if closed.
pub fn abstraction_variable(a: &Formula) -> Result<String, CatalogError> {
    let free = a.free_vars();
    match free.len() {
        0 => Ok("x".to_string()),
        1 => Ok(free.into_iter().next().unwrap_or_default()),
        _ => Err(CatalogError::Arity(a.to_string())),
    }
}

/// `{v|A}` for the abstraction variable of `A`.
pub fn builder_for(a: &Formula) -> Result<Term, CatalogError> {
    Ok(Term::builder(abstraction_variable(a)?, a.clone()))
}

/// `A(y)` together with the fresh `y`.
fn instantiate(a: &Formula, avoid: &BTreeSet<String>) -> Result<(String, Formula), CatalogError> {
    let v = abstraction_variable(a)?;
    let mut avoid = avoid.clone();
    avoid.extend(a.all_vars());
    avoid.insert(v.clone());
    let y = fresh_name("y", &avoid);
    Ok((y.clone(), a.substitute(&v, &Term::var(y))))
}

/// The comprehension instance of `variant` for `A`.
pub fn comprehension_instance(
    variant: Comprehension,
    a: &Formula,
) -> Result<SchemaInstance, CatalogError> {
    let t = builder_for(a)?;
    let (y, ay) = instantiate(a, &BTreeSet::new())?;
    let member = Formula::member(Term::var(&y), t.clone());
    let n = Formula::normal(t);
    let plain = || Formula::forall(&y, Formula::iff(member.clone(), ay.clone()));
    let formula = match variant {
        Comprehension::Naive => plain(),
        Comprehension::RaBaDi => Formula::forall(
            &y,
            Formula::iff(member.clone(), Formula::or(ay.clone(), Formula::not(n))),
        ),
        Comprehension::RinoBaCo => Formula::forall(
            &y,
            Formula::iff(member.clone(), Formula::and(ay.clone(), n)),
        ),
        Comprehension::NoBI => Formula::implies(n, plain()),
        Comprehension::NoBE => Formula::and(
            Formula::implies(n.clone(), plain()),
            Formula::implies(plain(), n),
        ),
    };
    Ok(SchemaInstance {
        schema: SchemaId::Comprehension(variant),
        source: Some(a.clone()),
        payload: Payload::Closed(formula),
    })
}

/// `Normal({x|A})` for a stratified `A`.
pub fn stratified_instance(a: &Formula) -> Result<SchemaInstance, CatalogError> {
    Ok(SchemaInstance {
        schema: SchemaId::StratifiedNormal,
        source: Some(a.clone()),
        payload: Payload::Closed(Formula::normal(builder_for(a)?)),
    })
}

/// `(A y. (A(y) <-> B(y))) -> {x|A} = {x|B}`.
pub fn ea2_instance(a: &Formula, b: &Formula) -> Result<SchemaInstance, CatalogError> {
    let avoid: BTreeSet<String> = b.all_vars();
    let (y, ay) = instantiate(a, &avoid)?;
    let vb = abstraction_variable(b)?;
    let by = b.substitute(&vb, &Term::var(&y));
    let formula = Formula::implies(
        Formula::forall(&y, Formula::iff(ay, by)),
        Formula::equal(builder_for(a)?, builder_for(b)?),
    );
    Ok(SchemaInstance {
        schema: SchemaId::Eventuality(Eventuality::EA2),
        source: Some(a.clone()),
        payload: Payload::Closed(formula),
    })
}

/// `N({x|A}) | N({x|Supplement-A})`.
pub fn ea9_instance(a: &Formula) -> Result<SchemaInstance, CatalogError> {
    let formula = Formula::or(
        Formula::normal(builder_for(a)?),
        Formula::normal(builder_for(&a.supplement())?),
    );
    Ok(SchemaInstance {
        schema: SchemaId::Eventuality(Eventuality::EA9),
        source: Some(a.clone()),
        payload: Payload::Closed(formula),
    })
}

/// The formula families a configuration is checked against.
#[derive(Clone, Debug)]
pub struct Families {
    /// Comprehension family; closed under supplements when EA9 is selected.
    pub unary: FormulaFamily,
    /// Members before supplements were added.
    pub base_len: usize,
    /// `supplement_of[i]`: index of the supplement of member `i`, for the
    /// base members when EA9 is selected.
    pub supplement_of: Vec<usize>,
    /// Two-variable family for the image axiom, if evaluated.
    pub binary: Option<FormulaFamily>,
}

impl Families {
    pub fn for_config(cfg: &SystemConfig) -> Result<Families, CatalogError> {
        Families::for_config_with_depth(cfg, cfg.family_depth)
    }

    pub fn for_config_with_depth(
        cfg: &SystemConfig,
        depth: usize,
    ) -> Result<Families, CatalogError> {
        let unary = enumerate_family(depth, cfg.family_constants)?;
        Families::with_unary(cfg, unary)
    }

    /// Uses a caller-supplied comprehension family.
    pub fn with_unary(cfg: &SystemConfig, unary: FormulaFamily) -> Result<Families, CatalogError> {
        let base_len = unary.len();
        let (unary, supplement_of) = if cfg.has_ea(Eventuality::EA9) {
            let closed = unary.with_supplements();
            let index: BTreeMap<&Formula, usize> = closed
                .members
                .iter()
                .enumerate()
                .map(|(i, f)| (f, i))
                .collect();
            let sup = closed.members[..base_len]
                .iter()
                .map(|f| index[&f.supplement()])
                .collect();
            (closed, sup)
        } else {
            (unary, Vec::new())
        };
        for m in &unary.members {
            abstraction_variable(m)?;
        }
        let binary = if cfg.has(Fundamental::FA4) && image_evaluated(cfg.fa4) {
            Some(enumerate_binary_family(
                cfg.image_family_depth,
                cfg.family_constants,
            )?)
        } else {
            None
        };
        Ok(Families {
            unary,
            base_len,
            supplement_of,
            binary,
        })
    }

    /// Constants that need a designation: those mentioned by either family,
    /// plus the `@` constant when EA1 or EA4 is selected.
    pub fn needed_constants(&self, cfg: &SystemConfig) -> BTreeSet<Constant> {
        let mut out: BTreeSet<Constant> = self
            .unary
            .members
            .iter()
            .chain(self.binary.iter().flat_map(|b| b.members.iter()))
            .flat_map(Formula::constants)
            .collect();
        if cfg.has_ea(Eventuality::EA1) || cfg.has_ea(Eventuality::EA4) {
            out.insert(cfg.at_target);
        }
        out
    }
}

fn image_evaluated(ax: ImageAxiom) -> bool {
    !matches!(ax, ImageAxiom::None | ImageAxiom::Delta)
}

/// Selected axioms that are carried but not checked: choice, FA1 when `OM`
/// never gets a designation, and the delta image axiom.
pub fn not_evaluated(cfg: &SystemConfig, families: &Families) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(name) = cfg.choice.name() {
        out.push(name.to_string());
    }
    if cfg.has(Fundamental::FA1) && !families.needed_constants(cfg).contains(&Constant::Om) {
        out.push("FA1".to_string());
    }
    if cfg.has(Fundamental::FA4) && cfg.fa4 == ImageAxiom::Delta {
        out.push("FA4delta".to_string());
    }
    out
}

/// Every evaluated axiom instance of `cfg` on `s`, in canonical order:
/// comprehension, stratified normality, extensionality, FA1..FA4, EA1..EA9,
/// KNoU, then the numbered normality condition.
///
/// EA2 pairs are emitted only for members with equal truth sets on `s`
/// (other pairs hold vacuously), chaining consecutive members of each class.
pub fn list_axiom_instances(
    cfg: &SystemConfig,
    families: &Families,
    s: &Structure,
) -> Result<Vec<SchemaInstance>, CatalogError> {
    let members = &families.unary.members;
    let mut out = Vec::new();
    for a in members {
        out.push(comprehension_instance(cfg.comprehension, a)?);
    }
    if cfg.nc == NormalityCondition::Stratified {
        for a in members.iter().filter(|a| stratified(a)) {
            out.push(stratified_instance(a)?);
        }
    }
    let meta = |schema: SchemaId, check: MetaCheck| SchemaInstance {
        schema,
        source: None,
        payload: Payload::Meta(check),
    };
    if cfg.extensionality != Extensionality::None {
        out.push(meta(
            SchemaId::Extensionality(cfg.extensionality),
            MetaCheck::Structure,
        ));
    }
    if cfg.has(Fundamental::FA1) && s.designations.get(Constant::Om).is_some() {
        out.push(SchemaInstance {
            schema: SchemaId::Fundamental(Fundamental::FA1),
            source: None,
            payload: Payload::Closed(Formula::normal(Term::Const(Constant::Om))),
        });
    }
    for fa in [Fundamental::FA2, Fundamental::FA3] {
        if cfg.has(fa) {
            for e in s.elements() {
                out.push(meta(SchemaId::Fundamental(fa), MetaCheck::Element(e)));
            }
        }
    }
    if let Some(binary) = &families.binary {
        let schema = SchemaId::Image(cfg.fa4, cfg.drop_normal_y);
        let mut functional = Vec::new();
        for f in &binary.members {
            let rel = binary_relation(f, s, cfg)?;
            if checks::is_functional(&rel) {
                functional.push(f);
            }
        }
        for e in s.elements() {
            for f in &functional {
                out.push(SchemaInstance {
                    schema,
                    source: Some((*f).clone()),
                    payload: Payload::Meta(MetaCheck::Image {
                        element: e,
                        relation: (*f).clone(),
                    }),
                });
            }
        }
    }
    for ea in Eventuality::ALL {
        if !cfg.has_ea(ea) {
            continue;
        }
        let schema = SchemaId::Eventuality(ea);
        match ea {
            Eventuality::EA1 | Eventuality::EA3 => out.push(meta(schema, MetaCheck::Structure)),
            Eventuality::EA2 => {
                for (a, b) in ea2_pairs(cfg, members, s)? {
                    out.push(ea2_instance(&members[a], &members[b])?);
                }
            }
            Eventuality::EA9 => {
                for a in &members[..families.base_len] {
                    out.push(ea9_instance(a)?);
                }
            }
            _ => {
                for e in s.elements() {
                    out.push(meta(schema, MetaCheck::Element(e)));
                }
            }
        }
    }
    if let NormalityCondition::Numbered(id) = cfg.nc {
        for e in s.elements() {
            out.push(meta(
                SchemaId::Normality(id, cfg.primed),
                MetaCheck::Element(e),
            ));
        }
    }
    Ok(out)
}

/// Truth set of each family member on `s`.
pub fn truth_sets(
    cfg: &SystemConfig,
    members: &[Formula],
    s: &Structure,
) -> Result<Vec<ElemSet>, CatalogError> {
    members
        .iter()
        .map(|a| {
            let v = abstraction_variable(a)?;
            let c = Compiled::new(a, &[v], Some(s))?;
            c.check_designations(s)?;
            Ok(c.truth_set(s, cfg.philosophy))
        })
        .collect()
}

/// Consecutive pairs within each class of members sharing a truth set.
pub fn ea2_pairs(
    cfg: &SystemConfig,
    members: &[Formula],
    s: &Structure,
) -> Result<Vec<(usize, usize)>, CatalogError> {
    let truths = truth_sets(cfg, members, s)?;
    let mut last: BTreeMap<ElemSet, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (i, t) in truths.iter().enumerate() {
        if let Some(prev) = last.insert(*t, i) {
            pairs.push((prev, i));
        }
    }
    Ok(pairs)
}
