//! Adjacent-pair rewrite systems and normal forms.

use std::cmp::Ordering;

use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use dashmap::DashMap;

use super::gen::{word_charge, word_grade, word_text, Gen, Word};
use super::poly::NCPoly;
use crate::error::{Error, Result};
use crate::qscalar::{QScalar, Rational};

/// Per-generator sort data: `(primary weight, secondary weight, lex rank)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenKey {
    pub w1: u32,
    pub w2: u32,
    pub rank: u32,
}

/// Monomial order: primary weight sum, secondary weight sum, length, then
/// lexicographic by generator rank. Compatible with concatenation and
/// well-founded because every primary weight is positive.
#[derive(Clone, Debug, Default)]
pub struct WordOrder {
    keys: HashMap<Gen, GenKey>,
}

impl WordOrder {
    pub fn key(&self, g: Gen) -> Option<GenKey> {
        self.keys.get(&g).copied()
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.keys.contains_key(&g)
    }

    pub fn cmp_gens(&self, a: Gen, b: Gen) -> Ordering {
        self.keys[&a].rank.cmp(&self.keys[&b].rank)
    }

    pub fn cmp_words(&self, a: &[Gen], b: &[Gen]) -> Ordering {
        let wt = |w: &[Gen]| {
            w.iter().fold((0u32, 0u32), |(x, y), g| {
                let k = self.keys[g];
                (x + k.w1, y + k.w2)
            })
        };
        let (a1, a2) = wt(a);
        let (b1, b2) = wt(b);
        a1.cmp(&b1)
            .then(a2.cmp(&b2))
            .then(a.len().cmp(&b.len()))
            .then_with(|| {
                for (x, y) in a.iter().zip(b.iter()) {
                    let c = self.cmp_gens(*x, *y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }

    /// Generators sorted by rank.
    pub fn gens(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.keys.keys().copied().collect();
        v.sort_by_key(|g| self.keys[g].rank);
        v
    }
}

#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: (Gen, Gen),
    pub rhs: NCPoly,
}

/// Incremental construction of a [`RewriteSystem`].
#[derive(Clone, Debug)]
pub struct SystemBuilder {
    name: String,
    order: WordOrder,
    next_rank: u32,
    rules: HashMap<(Gen, Gen), NCPoly>,
    annihilators: BTreeSet<Gen>,
    inverse_table: Vec<InverseEntry>,
}

/// Records the defining relation of a formal inverse generator.
#[derive(Clone, Debug)]
pub struct InverseEntry {
    pub inverse: Gen,
    pub defining: NCPoly,
}

impl SystemBuilder {
    pub fn new(name: &str) -> Self {
        SystemBuilder {
            name: name.into(),
            order: WordOrder::default(),
            next_rank: 0,
            rules: HashMap::new(),
            annihilators: BTreeSet::new(),
            inverse_table: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> &WordOrder {
        &self.order
    }

    /// Append a generator above all existing ones in lex rank.
    pub fn gen(&mut self, g: Gen, w1: u32, w2: u32) -> &mut Self {
        assert!(w1 > 0, "primary weight must be positive");
        if !self.order.keys.contains_key(&g) {
            self.order.keys.insert(g, GenKey { w1, w2, rank: self.next_rank });
            self.next_rank += 1;
        }
        self
    }

    pub fn gens(&mut self, gs: impl IntoIterator<Item = Gen>, w1: u32) -> &mut Self {
        for g in gs {
            self.gen(g, w1, 0);
        }
        self
    }

    pub fn has_gen(&self, g: Gen) -> bool {
        self.order.contains(g)
    }

    pub fn has_rule(&self, a: Gen, b: Gen) -> bool {
        self.rules.contains_key(&(a, b))
    }

    pub fn rule_rhs(&self, a: Gen, b: Gen) -> Option<&NCPoly> {
        self.rules.get(&(a, b))
    }

    /// Install `a b -> rhs`, validating grade, charge and order decrease.
    pub fn rule(&mut self, a: Gen, b: Gen, rhs: NCPoly) -> Result<&mut Self> {
        let lhs = [a, b];
        for g in lhs.iter().copied().chain(rhs.generators()) {
            if !self.order.contains(g) {
                return Err(Error::UnknownGenerator(g.to_string(), self.name.clone()));
            }
        }
        for (w, _) in rhs.terms() {
            if word_grade(w) != word_grade(&lhs) || word_charge(w) != word_charge(&lhs) {
                return Err(Error::RuleDerivation(format!(
                    "rule {} -> {} does not conserve grade/charge",
                    word_text(&lhs),
                    rhs
                )));
            }
            if self.order.cmp_words(w, &lhs) != Ordering::Less {
                return Err(Error::RuleDerivation(format!(
                    "rule {} -> {} does not decrease the word order",
                    word_text(&lhs),
                    rhs
                )));
            }
        }
        if self.rules.contains_key(&(a, b)) {
            return Err(Error::RuleDerivation(format!("duplicate rule for {}", word_text(&lhs))));
        }
        self.rules.insert((a, b), rhs);
        Ok(self)
    }

    /// Replace an existing rule (used for negative controls).
    pub fn override_rule(&mut self, a: Gen, b: Gen, rhs: NCPoly) -> &mut Self {
        self.rules.insert((a, b), rhs);
        self
    }

    pub fn remove_rule(&mut self, a: Gen, b: Gen) -> &mut Self {
        self.rules.remove(&(a, b));
        self
    }

    /// Marks `g` as annihilating the unit from the left (derivative symbols).
    pub fn annihilator(&mut self, g: Gen) -> &mut Self {
        self.annihilators.insert(g);
        self
    }

    pub fn record_inverse(&mut self, inverse: Gen, defining: NCPoly) -> &mut Self {
        self.inverse_table.push(InverseEntry { inverse, defining });
        self
    }

    /// Solve a set of relations (each meaning `p = 0`) for their largest
    /// words by Gaussian elimination and install one rule per pivot. Every
    /// pivot must be a length-2 word.
    pub fn relations(&mut self, rels: &[NCPoly]) -> Result<usize> {
        let rows = reduce_rows(rels, &self.order);
        let mut count = 0;
        for row in rows {
            let (lead, lc) = leading(&row, &self.order).expect("nonzero row");
            if lead.len() != 2 {
                return Err(Error::RuleDerivation(format!(
                    "relation {} has leading word {} of length {}",
                    row,
                    word_text(&lead),
                    lead.len()
                )));
            }
            let inv = lc.inv()?;
            let mut rhs = NCPoly::zero();
            for (w, c) in row.terms() {
                if *w != lead {
                    rhs.add_term(w.clone(), -(c * &inv));
                }
            }
            self.rule(lead[0], lead[1], rhs)?;
            count += 1;
        }
        Ok(count)
    }

    pub fn build(&self) -> RewriteSystem {
        RewriteSystem {
            name: self.name.clone(),
            order: self.order.clone(),
            rules: Arc::new(self.rules.clone()),
            annihilators: self.annihilators.clone(),
            inverse_table: self.inverse_table.clone(),
            memo: Arc::new(DashMap::new()),
            memo_bytes: Arc::new(AtomicUsize::new(0)),
            memo_cap: memo_cap_from_env(),
        }
    }
}

fn memo_cap_from_env() -> usize {
    std::env::var("QGV_MEMO_BYTES").ok().and_then(|v| v.parse().ok()).unwrap_or(2 << 30)
}

fn leading(p: &NCPoly, order: &WordOrder) -> Option<(Word, QScalar)> {
    p.terms().max_by(|a, b| order.cmp_words(a.0, b.0)).map(|(w, c)| (w.clone(), c.clone()))
}

/// Reduced row echelon form of a family of polynomials, pivots on the largest word.
fn reduce_rows(rels: &[NCPoly], order: &WordOrder) -> Vec<NCPoly> {
    let mut rows: Vec<NCPoly> = Vec::new();
    for r in rels {
        let mut r = r.clone();
        // eliminate existing pivots from r
        loop {
            let mut changed = false;
            for row in &rows {
                let (lead, lc) = leading(row, order).unwrap();
                let c = r.coeff(&lead);
                if !c.is_zero() {
                    let f = -(&c * &lc.inv().unwrap());
                    r.add_scaled(row, &f);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if r.is_zero() {
            continue;
        }
        let (lead, lc) = leading(&r, order).unwrap();
        let r = r.scale(&lc.inv().unwrap());
        for row in rows.iter_mut() {
            let c = row.coeff(&lead);
            if !c.is_zero() {
                row.add_scaled(&r, &(-c));
            }
        }
        rows.push(r);
    }
    rows
}

/// Which redex a naive reduction picks first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// An immutable rule set plus a shared normal-form memo.
#[derive(Clone)]
pub struct RewriteSystem {
    name: String,
    order: WordOrder,
    rules: Arc<HashMap<(Gen, Gen), NCPoly>>,
    annihilators: BTreeSet<Gen>,
    inverse_table: Vec<InverseEntry>,
    memo: Arc<DashMap<Word, Arc<NCPoly>>>,
    memo_bytes: Arc<AtomicUsize>,
    memo_cap: usize,
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem").field("name", &self.name).field("rules", &self.rules.len()).finish()
    }
}

impl RewriteSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> &WordOrder {
        &self.order
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.order.gens()
    }

    pub fn knows(&self, g: Gen) -> bool {
        self.order.contains(g)
    }

    pub fn rule(&self, a: Gen, b: Gen) -> Option<&NCPoly> {
        self.rules.get(&(a, b))
    }

    pub fn rules(&self) -> Vec<RewriteRule> {
        let mut v: Vec<RewriteRule> =
            self.rules.iter().map(|(k, r)| RewriteRule { lhs: *k, rhs: r.clone() }).collect();
        v.sort_by_key(|r| r.lhs);
        v
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn inverse_table(&self) -> &[InverseEntry] {
        &self.inverse_table
    }

    /// Back to a builder with the same generators and rules.
    pub fn to_builder(&self) -> SystemBuilder {
        SystemBuilder {
            name: self.name.clone(),
            order: self.order.clone(),
            next_rank: self.order.keys.values().map(|k| k.rank + 1).max().unwrap_or(0),
            rules: (*self.rules).clone(),
            annihilators: self.annihilators.clone(),
            inverse_table: self.inverse_table.clone(),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn check_known(&self, p: &NCPoly) -> Result<()> {
        for g in p.generators() {
            if !self.knows(g) {
                return Err(Error::UnknownGenerator(g.to_string(), self.name.clone()));
            }
        }
        Ok(())
    }

    /// Product of two polynomials of this algebra (unreduced).
    pub fn multiply(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        for p in [a, b] {
            for g in p.generators() {
                if !self.knows(g) {
                    return Err(Error::MixedAlgebra(format!("{g} is not a generator of {}", self.name)));
                }
            }
        }
        Ok(a * b)
    }

    pub fn is_normal(&self, w: &[Gen]) -> bool {
        w.windows(2).all(|p| !self.rules.contains_key(&(p[0], p[1])))
    }

    /// Unique reduced representative.
    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        self.check_known(p)?;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let r = self.nf_word(w);
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    /// Normal form of `p`, then drop every word containing an annihilator:
    /// the action of the algebra on the unit (derivatives kill constants).
    pub fn act_on_unit(&self, p: &NCPoly) -> Result<NCPoly> {
        let nf = self.normal_form(p)?;
        if self.annihilators.is_empty() {
            return Ok(nf);
        }
        Ok(nf.filter(|w| !w.iter().any(|g| self.annihilators.contains(g))))
    }

    /// Reduce `a * b`.
    pub fn mul_nf(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        self.normal_form(&self.multiply(a, b)?)
    }

    pub fn nf_word(&self, w: &[Gen]) -> Arc<NCPoly> {
        if self.is_normal(w) {
            return Arc::new(NCPoly::word(w));
        }
        if let Some(r) = self.memo.get(w) {
            return r.clone();
        }
        // left to right: normal prefix times one generator at a time
        let mut acc = NCPoly::one();
        for &g in w {
            let mut next = NCPoly::zero();
            for (v, c) in acc.terms() {
                let r = self.append(v, g);
                next.add_scaled(&r, c);
            }
            acc = next;
        }
        let r = Arc::new(acc);
        self.remember(w, &r);
        r
    }

    /// Normal form of `v * g` for a normal word `v`.
    fn append(&self, v: &[Gen], g: Gen) -> Arc<NCPoly> {
        let Some(&last) = v.last() else {
            return Arc::new(NCPoly::gen(g));
        };
        let Some(rhs) = self.rules.get(&(last, g)) else {
            let mut w: Word = v.iter().copied().collect();
            w.push(g);
            return Arc::new(NCPoly::term(w, QScalar::one()));
        };
        let mut key: Word = v.iter().copied().collect();
        key.push(g);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let prefix = &v[..v.len() - 1];
        let mut out = NCPoly::zero();
        for (rw, rc) in rhs.terms() {
            let mut acc = NCPoly::word(prefix);
            for &h in rw.iter() {
                let mut next = NCPoly::zero();
                for (u, c) in acc.terms() {
                    next.add_scaled(&self.append(u, h), c);
                }
                acc = next;
            }
            out.add_scaled(&acc, rc);
        }
        let r = Arc::new(out);
        self.remember(&key, &r);
        r
    }

    fn remember(&self, w: &[Gen], r: &Arc<NCPoly>) {
        let approx = 64 + w.len() * 3 + r.len() * 96;
        let used = self.memo_bytes.fetch_add(approx, AtomicOrdering::Relaxed) + approx;
        if used > self.memo_cap {
            self.memo.clear();
            self.memo_bytes.store(0, AtomicOrdering::Relaxed);
        }
        self.memo.insert(w.iter().copied().collect(), r.clone());
    }

    /// First word whose memoized, leftmost and rightmost normal forms differ.
    pub fn strategy_disagreement(&self, words: &[Word]) -> Result<Option<Word>> {
        let bad: Vec<Result<Option<Word>>> = words
            .par_iter()
            .map(|w| {
                let p = NCPoly::word(w);
                let a = self.normal_form(&p)?;
                let l = self.normal_form_naive(&p, Strategy::Leftmost)?;
                let r = self.normal_form_naive(&p, Strategy::Rightmost)?;
                Ok((a != l || a != r).then(|| w.clone()))
            })
            .collect();
        for b in bad {
            if let Some(w) = b? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Direct reduction without memoization, choosing the leftmost or
    /// rightmost redex in every term. An independent route to the normal form.
    pub fn normal_form_naive(&self, p: &NCPoly, strategy: Strategy) -> Result<NCPoly> {
        self.check_known(p)?;
        let mut cur = p.clone();
        let mut steps = 0usize;
        loop {
            let mut next = NCPoly::zero();
            let mut changed = false;
            for (w, c) in cur.terms() {
                let pos = match strategy {
                    Strategy::Leftmost => (0..w.len().saturating_sub(1)).find(|&i| self.rules.contains_key(&(w[i], w[i + 1]))),
                    Strategy::Rightmost => {
                        (0..w.len().saturating_sub(1)).rev().find(|&i| self.rules.contains_key(&(w[i], w[i + 1])))
                    }
                };
                match pos {
                    None => next.add_term(w.clone(), c.clone()),
                    Some(i) => {
                        changed = true;
                        let rhs = &self.rules[&(w[i], w[i + 1])];
                        for (rw, rc) in rhs.terms() {
                            let mut nw: Word = w[..i].iter().copied().collect();
                            nw.extend(rw.iter().copied());
                            nw.extend(w[i + 2..].iter().copied());
                            next.add_term(nw, c * rc);
                        }
                    }
                }
            }
            cur = next;
            if !changed {
                return Ok(cur);
            }
            steps += 1;
            assert!(steps < 1_000_000, "reduction did not terminate");
        }
    }

    /// Same rules with every coefficient specialized at `s = s0`.
    pub fn specialize(&self, s0: &Rational) -> Result<RewriteSystem> {
        let mut b = self.to_builder();
        b.name = format!("{}@s={}", self.name, s0);
        let mut rules = HashMap::new();
        for (k, r) in self.rules.iter() {
            rules.insert(*k, r.specialize(s0)?);
        }
        b.rules = rules;
        let mut inv = Vec::new();
        for e in &self.inverse_table {
            inv.push(InverseEntry { inverse: e.inverse, defining: e.defining.specialize(s0)? });
        }
        b.inverse_table = inv;
        Ok(b.build())
    }

    /// Every overlap `a b c` with rules on both `a b` and `b c` must resolve
    /// to one normal form. Returns the unresolved overlaps.
    pub fn check_local_confluence(&self, maxlen: usize) -> Result<ConfluenceReport> {
        if maxlen < 3 {
            return Err(Error::Config("maxlen must be at least 3".into()));
        }
        let mut by_first: HashMap<Gen, Vec<Gen>> = HashMap::new();
        for &(a, b) in self.rules.keys() {
            by_first.entry(a).or_default().push(b);
        }
        let mut pairs: Vec<(Gen, Gen, Gen)> = Vec::new();
        for &(a, b) in self.rules.keys() {
            if let Some(cs) = by_first.get(&b) {
                for &c in cs {
                    pairs.push((a, b, c));
                }
            }
        }
        pairs.sort();
        use rayon::prelude::*;
        let failures: Vec<CriticalPair> = pairs
            .par_iter()
            .filter_map(|&(a, b, c)| {
                let left = self.rules[&(a, b)].rmul_word(&[c]);
                let right = self.rules[&(b, c)].lmul_word(&[a]);
                let l = self.normal_form(&left).ok()?;
                let r = self.normal_form(&right).ok()?;
                if l == r {
                    None
                } else {
                    Some(CriticalPair { word: vec![a, b, c], difference: &l - &r })
                }
            })
            .collect();
        Ok(ConfluenceReport { system: self.name.clone(), overlaps: pairs.len(), unresolved: failures })
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub word: Vec<Gen>,
    pub difference: NCPoly,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub system: String,
    pub overlaps: usize,
    pub unresolved: Vec<CriticalPair>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn describe(&self) -> String {
        self.unresolved
            .iter()
            .take(5)
            .map(|c| format!("[{}]: {}", word_text(&c.word), c.difference))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::gen::Gen;

    // quantum plane: y x = q x y
    fn plane() -> RewriteSystem {
        let (x, y) = (Gen::x(1, 1), Gen::x(1, 2));
        let mut b = SystemBuilder::new("plane");
        b.gen(x, 1, 0).gen(y, 1, 0);
        b.rule(y, x, NCPoly::word(&[x, y]).scale(&QScalar::q())).unwrap();
        b.build()
    }

    #[test]
    fn plane_normal_form() {
        let s = plane();
        let (x, y) = (Gen::x(1, 1), Gen::x(1, 2));
        let p = NCPoly::word(&[y, y, x]);
        let nf = s.normal_form(&p).unwrap();
        assert_eq!(nf, NCPoly::word(&[x, y, y]).scale(&QScalar::q_pow(2)));
        assert_eq!(s.normal_form(&nf).unwrap(), nf);
        assert_eq!(s.normal_form_naive(&p, Strategy::Leftmost).unwrap(), nf);
    }

    #[test]
    fn rejects_non_decreasing_rule() {
        let (x, y) = (Gen::x(1, 1), Gen::x(1, 2));
        let mut b = SystemBuilder::new("bad");
        b.gen(x, 1, 0).gen(y, 1, 0);
        assert!(b.rule(x, y, NCPoly::word(&[y, x])).is_err());
    }

    #[test]
    fn rejects_charge_violation() {
        let (u, v) = (Gen::u(1, 1), Gen::u(1, -1));
        let mut b = SystemBuilder::new("bad");
        b.gen(u, 1, 0).gen(v, 1, 0);
        assert!(b.rule(v, u, NCPoly::word(&[u, u])).is_err());
    }

    #[test]
    fn relations_solved_for_largest_word() {
        let (x, y) = (Gen::x(1, 1), Gen::x(1, 2));
        let mut b = SystemBuilder::new("plane");
        b.gen(x, 1, 0).gen(y, 1, 0);
        // 2 y x - 2 q x y = 0
        let rel = NCPoly::word(&[y, x]).scale(&QScalar::int(2)) - NCPoly::word(&[x, y]).scale(&(QScalar::int(2) * QScalar::q()));
        assert_eq!(b.relations(&[rel]).unwrap(), 1);
        let s = b.build();
        assert_eq!(s.rule(y, x).unwrap(), &NCPoly::word(&[x, y]).scale(&QScalar::q()));
    }

    #[test]
    fn unknown_generator_is_mixed_algebra_error() {
        let s = plane();
        let err = s.multiply(&NCPoly::gen(Gen::u(1, 1)), &NCPoly::one()).unwrap_err();
        assert!(matches!(err, Error::MixedAlgebra(_)));
    }

    #[test]
    fn plane_is_confluent() {
        let r = plane().check_local_confluence(3).unwrap();
        assert!(r.is_confluent());
        assert!(plane().check_local_confluence(2).is_err());
    }
}
