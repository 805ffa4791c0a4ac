use std::collections::HashMap;

use super::{Constant, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Var(String),
    Const(Constant),
}

/// Union-find over level variables where each node stores its level offset
/// relative to the root of its class.
#[derive(Default)]
struct Levels {
    index: HashMap<Node, usize>,
    parent: Vec<usize>,
    offset: Vec<i64>,
}

impl Levels {
    fn node(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.offset.push(0);
        self.index.insert(n, i);
        i
    }

    /// Returns (root, level(i) - level(root)).
    fn find(&mut self, i: usize) -> (usize, i64) {
        if self.parent[i] == i {
            return (i, 0);
        }
        let (root, up) = self.find(self.parent[i]);
        self.offset[i] += up;
        self.parent[i] = root;
        (root, self.offset[i])
    }

    /// Imposes level(b) - level(a) = diff. Returns false on conflict.
    fn relate(&mut self, a: usize, b: usize, diff: i64) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra == rb {
            return ob - oa == diff;
        }
        // level(rb) = level(ra) + oa + diff - ob
        self.parent[rb] = ra;
        self.offset[rb] = oa + diff - ob;
        true
    }
}

/// Decides whether an integer level assignment exists with
/// `level(b) = level(a) + 1` for each `a in b` and equal levels across each
/// `a = b`. `N(t)` adds no constraint. A set-builder `{v|B}` sits one level
/// above its bound variable, and its body must itself be stratified.
pub fn stratified(f: &Formula) -> bool {
    let f = f.alpha_normalize();
    let mut levels = Levels::default();
    constrain(&f, &mut levels)
}

fn term_node(t: &Term, levels: &mut Levels) -> Option<(usize, i64)> {
    match t {
        Term::Var(v) => Some((levels.node(Node::Var(v.clone())), 0)),
        Term::Const(c) => Some((levels.node(Node::Const(*c)), 0)),
        Term::Builder(v, body) => {
            if !constrain(body, levels) {
                return None;
            }
            Some((levels.node(Node::Var(v.clone())), 1))
        }
    }
}

fn constrain(f: &Formula, levels: &mut Levels) -> bool {
    match f {
        Formula::Verum | Formula::Falsum => true,
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            let step = if matches!(f, Formula::Member(..)) {
                1
            } else {
                0
            };
            let (Some((na, oa)), Some((nb, ob))) = (term_node(a, levels), term_node(b, levels))
            else {
                return false;
            };
            // level(b) + ob = level(a) + oa + step
            levels.relate(na, nb, oa + step - ob)
        }
        Formula::Normal(t) => term_node(t, levels).is_some(),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => constrain(g, levels),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            constrain(a, levels) && constrain(b, levels)
        }
    }
}
