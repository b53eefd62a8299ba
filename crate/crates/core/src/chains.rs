//! Iterated centralizers `C^k(A)`, the descending envelope chain `E_k(H)`,
//! and verifiers that check the structural identities relating them to
//! upper central series on concrete finite groups.
//!
//! Everything is computed literally from the defining conditions; no level
//! is reused across different ambient groups, so identities between levels
//! computed inside different envelopes are checked rather than assumed.

use serde::Serialize;

use crate::grp::{ElemId, FiniteGroup, GroupError, Subgroup};

/// `C^0(A), C^1(A), ...` inside an ambient subgroup.
#[derive(Debug, Clone)]
pub struct IteratedCentralizerChain {
    pub ambient: Subgroup,
    pub target: Subgroup,
    /// Levels up to the first repeat (exclusive) or `kmax`.
    pub levels: Vec<Subgroup>,
    /// `Some(k)` when `C^{k+1} = C^k` was detected; every later level equals `C^k`.
    pub truncated_at: Option<usize>,
}

impl IteratedCentralizerChain {
    /// `C^k`, valid for any `k` up to the requested `kmax` (and beyond, once
    /// the chain has stalled).
    pub fn level(&self, k: usize) -> &Subgroup {
        &self.levels[k.min(self.levels.len() - 1)]
    }
}

pub fn iterated_centralizers(
    g: &FiniteGroup,
    a: &Subgroup,
    kmax: usize,
) -> Result<IteratedCentralizerChain, GroupError> {
    g.check_subgroup(a)?;
    Ok(iterated_centralizers_in(g, &g.full(), a, kmax))
}

/// `C^k_{ambient}(A) = {x ∈ ∩_{n<k} N(C^n) : [x, A] ⊆ C^{k-1}}`, with `C^0 = 1`.
pub fn iterated_centralizers_in(
    g: &FiniteGroup,
    ambient: &Subgroup,
    a: &Subgroup,
    kmax: usize,
) -> IteratedCentralizerChain {
    let a_ids: Vec<ElemId> = a.ids().collect();
    let mut levels = vec![g.trivial()];
    let mut normalizing = ambient.clone();
    let mut truncated_at = None;
    for k in 1..=kmax {
        let prev = &levels[k - 1];
        normalizing = g.normalizer_in(&normalizing, prev);
        let next = g.set_of(
            normalizing
                .ids()
                .filter(|&x| a_ids.iter().all(|&y| prev.contains(g.comm(x, y)))),
        );
        if &next == prev {
            truncated_at = Some(k - 1);
            break;
        }
        levels.push(next);
    }
    IteratedCentralizerChain {
        ambient: ambient.clone(),
        target: a.clone(),
        levels,
        truncated_at,
    }
}

/// One step of the envelope chain:
/// `{x ∈ E_k : [x, C^{k+1}_{E_k}(H)] ⊆ C^k_{E_k}(H)}`.
fn next_envelope(g: &FiniteGroup, ek: &Subgroup, h: &Subgroup, k: usize) -> Subgroup {
    let chain = iterated_centralizers_in(g, ek, h, k + 1);
    let upper: Vec<ElemId> = chain.level(k + 1).ids().collect();
    let lower = chain.level(k);
    g.set_of(
        ek.ids()
            .filter(|&x| upper.iter().all(|&c| lower.contains(g.comm(x, c)))),
    )
}

/// `E_0 = G, E_1, ..., E_kmax`.
pub fn envelope_terms(g: &FiniteGroup, h: &Subgroup, kmax: usize) -> Vec<Subgroup> {
    let mut terms = vec![g.full()];
    for k in 0..kmax {
        let next = next_envelope(g, &terms[k], h, k);
        terms.push(next);
    }
    terms
}

#[derive(Debug, Clone)]
pub struct EkChainReport {
    pub subgroup: Subgroup,
    pub terms: Vec<Subgroup>,
    pub orders: Vec<usize>,
    /// Number of terms in the longest constant suffix of `terms`.
    pub stable_run: usize,
    pub subgroup_class: Option<usize>,
    pub guaranteed_stable: bool,
    pub stability_reason: String,
}

/// Computes `E_0 ..= E_kmax`. Stability is only claimed when `H` is
/// nilpotent of class `c` and `max(c, 1) <= kmax`; a run of equal terms
/// otherwise is reported but proves nothing.
pub fn ek_chain(g: &FiniteGroup, h: &Subgroup, kmax: usize) -> Result<EkChainReport, GroupError> {
    g.check_subgroup(h)?;
    let terms = envelope_terms(g, h, kmax);
    let orders: Vec<usize> = terms.iter().map(Subgroup::order).collect();
    let last = terms.last().unwrap();
    let stable_run = terms.iter().rev().take_while(|t| *t == last).count();
    let subgroup_class = g.nilpotency_class_of(h);
    let (guaranteed_stable, stability_reason) = match subgroup_class {
        Some(c) if c.max(1) <= kmax => (
            true,
            format!(
                "H is nilpotent of class {c}; E_l = E_{} for all l >= {}",
                c.max(1),
                c.max(1)
            ),
        ),
        Some(c) => (
            false,
            format!("H is nilpotent of class {c} > kmax; observed constant run of {stable_run} term(s)"),
        ),
        None => (
            false,
            format!("H is not nilpotent; observed constant run of {stable_run} term(s) (not a proof of stabilization)"),
        ),
    };
    Ok(EkChainReport {
        subgroup: h.clone(),
        terms,
        orders,
        stable_run,
        subgroup_class,
        guaranteed_stable,
        stability_reason,
    })
}

/// Nilpotency class of `H` when nilpotent, otherwise `2·⌈log₂|G|⌉ + 2`.
pub fn default_kmax(g: &FiniteGroup, h: &Subgroup) -> usize {
    match g.nilpotency_class_of(h) {
        Some(c) => c.max(1),
        None => 2 * (usize::BITS - (g.order() - 1).leading_zeros()) as usize + 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One verified statement. `witness` explains a failure or a skip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    fn skipped(id: &str, claim: &str, reason: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            claim: claim.into(),
            status: Status::Skipped,
            witness: Some(reason.into()),
        }
    }
}

/// Accumulates the instances of one claim; the first failure is kept as witness.
struct Clause {
    id: &'static str,
    claim: &'static str,
    checked: usize,
    failure: Option<String>,
    skip_reason: Option<String>,
}

impl Clause {
    fn new(id: &'static str, claim: &'static str) -> Self {
        Self {
            id,
            claim,
            checked: 0,
            failure: None,
            skip_reason: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.skip_reason = Some(reason.into());
        self
    }

    fn finish(self) -> CheckRecord {
        let (status, witness) = match (self.failure, self.checked) {
            (Some(w), _) => (Status::Fail, Some(w)),
            (None, 0) => (
                Status::Skipped,
                Some(self.skip_reason.unwrap_or_else(|| "no applicable instance".into())),
            ),
            (None, _) => (Status::Pass, None),
        };
        CheckRecord {
            id: self.id.into(),
            claim: self.claim.into(),
            status,
            witness,
        }
    }
}

/// Names the first element on which two sets disagree.
fn diff(g: &FiniteGroup, left: &str, a: &Subgroup, right: &str, b: &Subgroup) -> String {
    if let Some(x) = a.first_outside(b) {
        format!("{} in {left} but not in {right}", g.element(x))
    } else if let Some(x) = b.first_outside(a) {
        format!("{} in {right} but not in {left}", g.element(x))
    } else {
        "sets agree".into()
    }
}

/// Checks the four basic properties of `C^k_G(H)`: subgroup, meets `H` in
/// `Z_k(H)`, equals `Z_k(G)` when `H = G`, and contains `H` at its class.
pub fn verify_bryant_lemma(g: &FiniteGroup, h: &Subgroup, kmax: usize) -> Vec<CheckRecord> {
    let class = g.nilpotency_class_of(h);
    let depth = kmax.max(class.unwrap_or(0));
    let full = g.full();
    let chain = iterated_centralizers_in(g, &full, h, depth);
    let zh = g.upper_central_series_of(h);

    let mut asc = Clause::new("bryant.ascending", "iterated centralizers ascend");
    let mut i = Clause::new("bryant.i", "C^k_G(H) is a subgroup of G");
    let mut ii = Clause::new("bryant.ii", "C^k_G(H) ∩ H = Z_k(H)");
    let mut iii = Clause::new("bryant.iii", "C^k_G(G) = Z_k(G)");
    let mut iv = Clause::new("bryant.iv", "H nilpotent of class c lies in C^c_G(H)");

    let zg = (h == &full).then(|| g.upper_central_series());
    for k in 0..=kmax {
        let ck = chain.level(k);
        asc.check(ck.is_subset(chain.level(k + 1)), || {
            format!("k={k}: {}", diff(g, "C^k", ck, "C^{k+1}", chain.level(k + 1)))
        });
        i.check(g.is_closed(ck), || format!("k={k}: C^k not closed: {}", g.describe(ck)));
        let meet = ck.intersection(h);
        let z = FiniteGroup::center_term(&zh, k);
        ii.check(&meet == z, || format!("k={k}: {}", diff(g, "C^k ∩ H", &meet, "Z_k(H)", z)));
        if let Some(zg) = &zg {
            let z = FiniteGroup::center_term(zg, k);
            iii.check(ck == z, || format!("k={k}: {}", diff(g, "C^k(G)", ck, "Z_k(G)", z)));
        }
    }
    let iii = if zg.is_none() { iii.skip("H ≠ G") } else { iii };
    let iv = match class {
        Some(c) => {
            let cc = chain.level(c);
            iv.check(h.is_subset(cc), || format!("c={c}: {}", diff(g, "H", h, "C^c", cc)));
            iv
        }
        None => iv.skip("H is not nilpotent"),
    };
    vec![asc.finish(), i.finish(), ii.finish(), iii.finish(), iv.finish()]
}

/// For `A ≤ B ≤ C`, finds the largest `k ≤ kmax` with `C^j_C(A) = Z_j(C)` for
/// all `j ≤ k` and checks the three conclusions that hypothesis implies.
pub fn verify_abc_lemma(
    g: &FiniteGroup,
    a: &Subgroup,
    b: &Subgroup,
    c: &Subgroup,
    kmax: usize,
) -> Result<Vec<CheckRecord>, GroupError> {
    if !a.is_subset(b) || !b.is_subset(c) {
        return Err(GroupError::NotNested);
    }
    let ca_c = iterated_centralizers_in(g, c, a, kmax + 1);
    let cb_c = iterated_centralizers_in(g, c, b, kmax + 1);
    let ca_b = iterated_centralizers_in(g, b, a, kmax + 1);
    let zc = g.upper_central_series_of(c);
    let zb = g.upper_central_series_of(b);

    let khyp = (0..=kmax)
        .take_while(|&j| ca_c.level(j) == FiniteGroup::center_term(&zc, j))
        .last()
        .expect("C^0 = Z_0 always holds");

    let mut hyp = Clause::new("abc.hypothesis", "C^j_C(A) = Z_j(C) for all j <= k");
    let mut i = Clause::new("abc.i", "C^j_C(A) = C^j_C(B) = Z_j(C)");
    let mut ii = Clause::new("abc.ii", "C^j_B(A) = Z_j(B) = Z_j(C) ∩ B");
    let mut iii = Clause::new("abc.iii", "C^{k+1}_B(A) = C^{k+1}_C(A) ∩ B");
    hyp.check(true, String::new);
    for j in 0..=khyp {
        let zcj = FiniteGroup::center_term(&zc, j);
        let zbj = FiniteGroup::center_term(&zb, j);
        i.check(cb_c.level(j) == zcj, || {
            format!("j={j}: {}", diff(g, "C^j_C(B)", cb_c.level(j), "Z_j(C)", zcj))
        });
        ii.check(ca_b.level(j) == zbj, || {
            format!("j={j}: {}", diff(g, "C^j_B(A)", ca_b.level(j), "Z_j(B)", zbj))
        });
        let meet = zcj.intersection(b);
        ii.check(zbj == &meet, || {
            format!("j={j}: {}", diff(g, "Z_j(B)", zbj, "Z_j(C) ∩ B", &meet))
        });
        let rhs = ca_c.level(j + 1).intersection(b);
        iii.check(ca_b.level(j + 1) == &rhs, || {
            format!("k={j}: {}", diff(g, "C^{k+1}_B(A)", ca_b.level(j + 1), "C^{k+1}_C(A) ∩ B", &rhs))
        });
    }
    let mut hyp = hyp.finish();
    if khyp < kmax {
        hyp.status = Status::Skipped;
        hyp.witness = Some(format!(
            "hypothesis holds for k <= {khyp} only; no claim for larger k"
        ));
    }
    Ok(vec![hyp, i.finish(), ii.finish(), iii.finish()])
}

/// Checks the structure of the envelope chain of `H` up to `kmax`.
pub fn verify_ek_structure(g: &FiniteGroup, h: &Subgroup, kmax: usize) -> Vec<CheckRecord> {
    let full = g.full();
    let terms = envelope_terms(g, h, kmax);
    let chains: Vec<IteratedCentralizerChain> = terms
        .iter()
        .enumerate()
        .map(|(k, ek)| iterated_centralizers_in(g, ek, h, k + 1))
        .collect();
    let centers: Vec<Vec<Subgroup>> = terms.iter().map(|e| g.upper_central_series_of(e)).collect();
    let h_ids: Vec<ElemId> = h.ids().collect();

    let mut shape = Clause::new(
        "envelope.shape",
        "E_0 = G, each E_k a subgroup, E_{k+1} ⊆ E_k, H ⊆ E_k",
    );
    shape.check(terms[0] == full, || "E_0 ≠ G".into());
    for (k, ek) in terms.iter().enumerate() {
        shape.check(g.is_closed(ek), || format!("E_{k} not closed"));
        shape.check(h.is_subset(ek), || format!("k={k}: {}", diff(g, "H", h, "E_k", ek)));
        if k + 1 < terms.len() {
            shape.check(terms[k + 1].is_subset(ek), || {
                format!("k={k}: {}", diff(g, "E_{k+1}", &terms[k + 1], "E_k", ek))
            });
        }
    }

    let mut double = Clause::new("envelope.double_centralizer", "E_1(H) = C_G(C_G(H))");
    if kmax >= 1 {
        let cc = g.centralizer_in(&full, &g.centralizer_in(&full, h));
        double.check(terms[1] == cc, || diff(g, "E_1", &terms[1], "C(C(H))", &cc));
    }

    let mut centers_eq = Clause::new(
        "envelope.centralizers_are_centers",
        "C^j_{E_k}(H) = Z_j(E_k) for j <= k",
    );
    let mut simplified = Clause::new(
        "envelope.simplified_form",
        "C^{i+1}_{E_k}(H) = {x ∈ E_k : [x, H] ⊆ Z_i(E_k)} for i <= k",
    );
    for k in 0..=kmax {
        let ek = &terms[k];
        for j in 0..=k {
            let z = FiniteGroup::center_term(&centers[k], j);
            centers_eq.check(chains[k].level(j) == z, || {
                format!("k={k} j={j}: {}", diff(g, "C^j_{E_k}", chains[k].level(j), "Z_j(E_k)", z))
            });
        }
        for i in 0..=k {
            let z = FiniteGroup::center_term(&centers[k], i);
            let simple = g.set_of(
                ek.ids()
                    .filter(|&x| h_ids.iter().all(|&y| z.contains(g.comm(x, y)))),
            );
            let def = chains[k].level(i + 1);
            simplified.check(def == &simple, || {
                format!("k={k} i={i}: {}", diff(g, "definition", def, "simplified", &simple))
            });
        }
    }

    let mut ascend = Clause::new("envelope.centers_ascend", "Z_i(E_i) ⊆ Z_j(E_j) for i <= j");
    for i in 0..=kmax {
        for j in i..=kmax {
            let zi = FiniteGroup::center_term(&centers[i], i);
            let zj = FiniteGroup::center_term(&centers[j], j);
            ascend.check(zi.is_subset(zj), || {
                format!("i={i} j={j}: {}", diff(g, "Z_i(E_i)", zi, "Z_j(E_j)", zj))
            });
        }
    }

    let mut abc = Clause::new(
        "envelope.abc_triples",
        "nested-centralizer conclusions hold for H ≤ E_j ≤ E_i",
    );
    for i in 0..=kmax {
        for j in i..=kmax {
            let recs = verify_abc_lemma(g, h, &terms[j], &terms[i], i).expect("chain is nested");
            for r in recs {
                abc.check(r.status != Status::Fail, || {
                    format!("i={i} j={j} {}: {}", r.id, r.witness.clone().unwrap_or_default())
                });
                if r.id == "abc.hypothesis" {
                    abc.check(r.status == Status::Pass, || {
                        format!("i={i} j={j}: hypothesis failed inside E_i")
                    });
                }
            }
        }
    }

    let mut reuse = Clause::new(
        "envelope.level_reuse",
        "C^{k+1}_{E_{k+1}}(H) = C^{k+1}_{E_k}(H) whenever C^{k+1}_{E_k}(H) ⊆ E_{k+1}",
    );
    for k in 0..kmax {
        let here = chains[k].level(k + 1);
        if here.is_subset(&terms[k + 1]) {
            let there = chains[k + 1].level(k + 1);
            reuse.check(here == there, || {
                format!("k={k}: {}", diff(g, "C^{k+1}_{E_k}", here, "C^{k+1}_{E_{k+1}}", there))
            });
        }
    }
    let reuse = reuse.skip("C^{k+1}_{E_k}(H) never contained in E_{k+1}");

    vec![
        shape.finish(),
        double.finish(),
        centers_eq.finish(),
        simplified.finish(),
        ascend.finish(),
        abc.finish(),
        reuse.finish(),
    ]
}

/// For nilpotent `H` of class `c`: `E_c` has class at most `c` (exactly `c`
/// when `c >= 1`), and `E_c = E_{c+1} = E_{c+2} = E_{c+3}`. Abelian `H` also
/// gets the double-centralizer check. The trivial subgroup is treated with
/// `c = 1`.
pub fn verify_nilpotent_envelope(g: &FiniteGroup, h: &Subgroup) -> Vec<CheckRecord> {
    const BOUND: &str = "envelope.class_bound";
    const BOUND_CLAIM: &str = "E_c(H) is nilpotent of class <= c";
    const EXACT: &str = "envelope.class_exact";
    const EXACT_CLAIM: &str = "E_c(H) has class exactly c";
    const STABLE: &str = "envelope.stabilizes";
    const STABLE_CLAIM: &str = "E_c = E_{c+1} = E_{c+2} = E_{c+3}";
    const ABELIAN: &str = "envelope.abelian_double_centralizer";
    const ABELIAN_CLAIM: &str = "C_G(C_G(H)) is abelian for abelian H";

    let Some(class) = g.nilpotency_class_of(h) else {
        return [(BOUND, BOUND_CLAIM), (EXACT, EXACT_CLAIM), (STABLE, STABLE_CLAIM), (ABELIAN, ABELIAN_CLAIM)]
            .into_iter()
            .map(|(id, claim)| CheckRecord::skipped(id, claim, "H is not nilpotent"))
            .collect();
    };
    let c = class.max(1);
    let terms = envelope_terms(g, h, c + 3);
    let ec = &terms[c];
    let ec_class = g.nilpotency_class_of(ec);

    let mut bound = Clause::new(BOUND, BOUND_CLAIM);
    bound.check(ec_class.is_some_and(|m| m <= c), || {
        format!("c={c}: class(E_c) = {ec_class:?}")
    });
    let mut exact = Clause::new(EXACT, EXACT_CLAIM);
    if class >= 1 {
        exact.check(ec_class == Some(c), || format!("c={c}: class(E_c) = {ec_class:?}"));
    }
    let exact = exact.skip("H is trivial (class 0)");
    let mut stable = Clause::new(STABLE, STABLE_CLAIM);
    for (l, el) in terms.iter().enumerate().skip(c + 1).take(3) {
        stable.check(el == ec, || format!("l={l}: {}", diff(g, "E_l", el, "E_c", ec)));
    }
    let mut abelian = Clause::new(ABELIAN, ABELIAN_CLAIM);
    if class <= 1 {
        let full = g.full();
        let cc = g.centralizer_in(&full, &g.centralizer_in(&full, h));
        abelian.check(g.is_abelian(&cc), || format!("C(C(H)) = {}", g.describe(&cc)));
    }
    let abelian = abelian.skip("H is not abelian");
    vec![bound.finish(), exact.finish(), stable.finish(), abelian.finish()]
}
