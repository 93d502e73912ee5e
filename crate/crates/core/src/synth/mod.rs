//! Construction of kernel-checked derivations of the slim and broad series,
//! the principles W, M₀ and R, and the `J5` equivalence.
//!
//! Every public entry point hands its output to the kernel before returning.

mod builder;

use thiserror::Error;

pub use builder::{FreshSupply, ProofBuilder};

use crate::formula::{Formula, IVar, Label};
use crate::kernel::{check, Derivation, LineError, Schema};
use crate::series::{
    broad_a, broad_b, broad_c, broad_d, broad_lhs, broad_target, gen_u, gen_v, gen_x, gen_y, gen_z, slim_a,
    slim_b_with_x, slim_c, slim_e,
};
use builder::{and, bx, dia, e, ext, imp, not, one, rhd};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("kernel rejected the synthesized derivation: {}", .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Rejected(Vec<LineError>),
    #[error("premise derivation: {0}")]
    Premise(String),
}

impl ProofBuilder {
    /// `⊢ ¬□C → ◇¬C`.
    fn not_box_to_dia_not(&mut self, c: &Formula) -> usize {
        let t = self.taut(&[], imp(&not(&not(c)), c));
        let lift = self.imp_lift(&e(), t);
        self.by_taut(&[], &[lift], imp(&not(&bx(&e(), c)), &dia(&e(), &not(c))))
    }

    /// `⊢ □^l¬(B ∧ □C) → □^l(B → ◇¬C)`.
    fn box_b_to_dia_not(&mut self, l: &Label, b: &Formula, c: &Formula) -> usize {
        let nb = self.not_box_to_dia_not(c);
        let t = self.by_taut(&[], &[nb], imp(&not(&and(b, &bx(&e(), c))), &imp(b, &dia(&e(), &not(c)))));
        self.imp_lift(l, t)
    }

    /// `⊢ (A ⊳^k B) ∧ ¬(A ⊳ ¬C) → ◇^k(B ∧ □C)`.
    fn lemma_r(&mut self, k: &IVar, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let lk = one(k);
        let nc = not(c);
        let dnc = dia(&e(), &nc);
        let j2b = self.ax(
            &[],
            Schema::J2b,
            imp(&and(&rhd(&lk, a, b), &bx(&lk, &imp(b, &dnc))), &rhd(&lk, a, &dnc)),
        );
        let j5 = self.ax(&[], Schema::J5, imp(&rhd(&lk, a, &dnc), &rhd(&e(), a, &nc)));
        let lift = self.box_b_to_dia_not(&lk, b, c);
        let goal = imp(&and(&rhd(&lk, a, b), &not(&rhd(&e(), a, &nc))), &dia(&lk, &and(b, &bx(&e(), c))));
        self.by_taut(&[], &[j2b, j5, lift], goal)
    }

    /// Shared tail of R and the slim series: from `⊢ (A ⊳^k B) ∧ Y → ◇^k Z`
    /// proves `⊢ A ⊳ B → Y ⊳ Z`.
    fn principle_from_lemma(
        &mut self,
        k: &IVar,
        (a, b, y, z): (&Formula, &Formula, &Formula, &Formula),
        lemma: usize,
    ) -> usize {
        let lk = one(k);
        let h = bx(&e(), &rhd(&lk, a, b));
        let delta = imp(&rhd(&lk, y, z), &rhd(&e(), y, z));
        let q = [h.clone(), delta];
        let thm = self.by_taut(&[], &[lemma], imp(&rhd(&lk, a, b), &imp(y, &dia(&lk, z))));
        let hyp = self.assume(&q, &h);
        let boxed = self.box_lift(&q, &e(), thm, &[hyp]);
        let first = self.j1(&q, boxed);
        let second = self.j5(&q, first);
        let p = self.discharge_with_ext(second, &h);
        self.ded_out(p, &[rhd(&e(), a, b)])
    }

    /// `⊢ ◇^k B → ◇^k(B ∧ □^k¬B)`, by Löb under `□^k`.
    fn dia_lob(&mut self, k: &IVar, b: &Formula) -> usize {
        let lk = one(k);
        let bnb = bx(&lk, &not(b));
        let t = self.taut(&[], imp(&not(&and(b, &bnb)), &imp(&bnb, &not(b))));
        let lift = self.imp_lift(&lk, t);
        let l3 = self.ax(&[], Schema::L3, imp(&bx(&lk, &imp(&bnb, &not(b))), &bnb));
        self.by_taut(&[], &[lift, l3], imp(&dia(&lk, b), &dia(&lk, &and(b, &bnb))))
    }

    /// `⊢ A ⊳ B → A ⊳ B ∧ □¬A`.
    pub fn w(&mut self, a: &Formula, b: &Formula) -> usize {
        let k = self.fresh();
        let lk = one(&k);
        let h = bx(&e(), &rhd(&lk, a, b));
        let bda = and(b, &dia(&e(), a));
        let bbk = and(b, &bx(&lk, &not(b)));
        let delta = imp(&rhd(&lk, &bda, &bbk), &rhd(&e(), &bda, &bbk));
        let q = [h.clone(), delta.clone()];

        let hyp = self.assume(&q, &h);
        let j4 = self.ax(&[], Schema::J4, imp(&rhd(&lk, a, b), &imp(&dia(&e(), a), &dia(&lk, b))));
        let dd = self.box_lift(&q, &e(), j4, &[hyp]);
        let contra = self.box_taut(&q, &e(), &[dd], imp(&bx(&lk, &not(b)), &bx(&e(), &not(a))));
        let s5 = self.j1(&q, dd);
        let t6 = self.taut(&[], imp(&bda, &dia(&e(), a)));
        let s6 = self.rhd_pre(&q, t6, s5);
        let lob = self.dia_lob(&k, b);
        let s7 = self.rhd_post(&q, s6, lob);
        let s8 = self.j5(&q, s7);
        let ext_hyp = self.assume(&q, &delta);
        let s9 = self.mp(s8, ext_hyp);
        let target = and(b, &bx(&e(), &not(a)));
        let sharpen = self.box_taut(&q, &e(), &[contra], imp(&bbk, &target));
        let s10 = self.j2b(&q, s9, sharpen);

        let x = rhd(&e(), a, b);
        let ctx = [x.clone()];
        let s11 = self.p_rule(s10, &h, std::slice::from_ref(&delta));
        let hx = self.assume(&ctx, &x);
        let split = Formula::or(target.clone(), bda.clone());
        let t = self.taut(&[], imp(b, &split));
        let s12 = self.rhd_post(&ctx, hx, t);
        let refl = self.taut(&[], imp(&target, &target));
        let refl = self.nec(&e(), refl);
        let refl = self.weaken(refl, &ctx);
        let s13 = self.j1(&ctx, refl);
        let s14 = self.j3(&ctx, s13, s11);
        let s15 = self.j2a(&ctx, s12, s14);
        self.ded_out(s15, &ctx)
    }

    /// `⊢ A ⊳ B → (◇A ∧ □C) ⊳ (B ∧ □C)`.
    pub fn m0(&mut self, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let k = self.fresh();
        let lk = one(&k);
        let h = bx(&e(), &rhd(&lk, a, b));
        let bc = bx(&e(), c);
        let lhs = and(&dia(&e(), a), &bc);
        let rhs = and(b, &bc);
        let delta = imp(&rhd(&lk, &lhs, &rhs), &rhd(&e(), &lhs, &rhs));
        let q = [h.clone(), delta];

        let hyp = self.assume(&q, &h);
        let j4 = self.ax(&[], Schema::J4, imp(&rhd(&lk, a, b), &imp(&dia(&e(), a), &dia(&lk, b))));
        let dd = self.box_lift(&q, &e(), j4, &[hyp]);
        let widened = self.box_taut(&q, &e(), &[dd], imp(&lhs, &and(&dia(&lk, b), &bc)));
        let s1 = self.j1(&q, widened);

        let l2 = self.ax(&[], Schema::L2, imp(&bc, &bx(&lk, &bc)));
        let t = self.taut(&[], imp(&not(&rhs), &imp(&bc, &not(b))));
        let lift = self.imp_lift(&lk, t);
        let l1 = self.ax(
            &[],
            Schema::L1,
            imp(&bx(&lk, &imp(&bc, &not(b))), &imp(&bx(&lk, &bc), &bx(&lk, &not(b)))),
        );
        let modal = self.by_taut(&[], &[l2, lift, l1], imp(&and(&dia(&lk, b), &bc), &dia(&lk, &rhs)));
        let s2 = self.rhd_post(&q, s1, modal);
        let s3 = self.j5(&q, s2);
        let p = self.discharge_with_ext(s3, &h);
        self.ded_out(p, &[rhd(&e(), a, b)])
    }

    /// `⊢ A ⊳ B → ¬(A ⊳ ¬C) ⊳ (B ∧ □C)`.
    pub fn r(&mut self, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let k = self.fresh();
        let lemma = self.lemma_r(&k, a, b, c);
        let y = crate::series::not_rhd_not(a.clone(), c.clone());
        let z = and(b, &bx(&e(), c));
        self.principle_from_lemma(&k, (a, b, &y, &z), lemma)
    }

    /// `⊢ (A_n ⊳^k B'_n) ∧ Y_n → ◇^k Z_n`, where `B'_n` is the consequent of `X_n`.
    fn lemma_slim(&mut self, n: usize, k: &IVar) -> usize {
        if n == 0 {
            return self.lemma_r(k, &slim_a(0), &slim_b_with_x(0, false), &slim_c(0));
        }
        let m = n - 1;
        let lk = one(k);
        let (a, b1, c, en) = (slim_a(n), slim_b_with_x(n, false), slim_c(n), slim_e(n));
        let (ym, zm, am) = (gen_y(m), gen_z(m), slim_a(m));
        let (yn, zn) = (gen_y(n), gen_z(n));
        let bc = bx(&e(), &c);
        let ea = rhd(&e(), &en, &am);
        let ez = rhd(&e(), &en, &zm);
        let d1 = Formula::or(Formula::or(not(&bc), not(&ea)), not(&ez));

        let j = self.fresh();
        let lj = one(&j);
        let to_a = self.slim_e_to_a(m, &j, &en);
        let t2 = self.slim_inner(m, &j, &en);

        let h1 = rhd(&lk, &a, &b1);
        let h2 = rhd(&e(), &en, &ym);
        let h3 = bx(&lk, &imp(&b1, &d1));
        let pj = bx(&lk, &rhd(&lj, &en, &ym));
        let q = [h1.clone(), h3.clone(), pj.clone()];
        let q1 = self.assume(&q, &h1);
        let q3 = self.assume(&q, &h3);
        let qp = self.assume(&q, &pj);
        let both = self.box_taut(&q, &lk, &[q3], imp(&b1, &and(&b1, &d1)));
        let s1 = self.j2b(&q, q1, both);
        let s2 = self.box_lift(&q, &lk, to_a, &[qp]);
        let s3 = self.box_lift(&q, &lk, t2, &[qp]);
        let s4 = self.box_taut(&q, &lk, &[s2, s3], imp(&and(&b1, &d1), &not(&bc)));
        let s5 = self.j2b(&q, s1, s4);
        let nb = self.not_box_to_dia_not(&c);
        let s6 = self.rhd_post(&q, s5, nb);
        let s7 = self.j5(&q, s6);
        let p = self.p_rule(s7, &pj, &[]);
        let main = self.ded_out(p, &[h1.clone(), h2, h3]);

        let t = self.taut(&[], imp(&not(&zn), &imp(&b1, &d1)));
        let lift = self.imp_lift(&lk, t);
        self.by_taut(&[], &[main, lift], imp(&and(&h1, &yn), &dia(&lk, &zn)))
    }

    /// `⊢ E ⊳^j Y_m → E ⊳ A_m`.
    fn slim_e_to_a(&mut self, m: usize, j: &IVar, en: &Formula) -> usize {
        let lj = one(j);
        let (am, cm, ym) = (slim_a(m), slim_c(m), gen_y(m));
        let t = self.taut(&[], imp(&not(&am), &imp(&am, &not(&cm))));
        let lift = self.imp_lift(&e(), t);
        let j1 = self.ax(&[], Schema::J1, imp(&bx(&e(), &imp(&am, &not(&cm))), &rhd(&e(), &am, &not(&cm))));
        let da = dia(&e(), &am);
        let y_da = self.by_taut(&[], &[lift, j1], imp(&ym, &da));
        let boxed = self.nec(&lj, y_da);
        let j2b = self.ax(
            &[],
            Schema::J2b,
            imp(&and(&rhd(&lj, en, &ym), &self.conclusion(boxed)), &rhd(&lj, en, &da)),
        );
        let j5 = self.ax(&[], Schema::J5, imp(&rhd(&lj, en, &da), &rhd(&e(), en, &am)));
        self.by_taut(&[], &[boxed, j2b, j5], imp(&rhd(&lj, en, &ym), &rhd(&e(), en, &am)))
    }

    /// `⊢ E ⊳^j Y_m → (X_m → E ⊳ Z_m)`.
    fn slim_inner(&mut self, m: usize, j: &IVar, en: &Formula) -> usize {
        let lj = one(j);
        let l = self.fresh();
        let ll = one(&l);
        let (am, bm, ym, zm, xm) = (slim_a(m), slim_b_with_x(m, false), gen_y(m), gen_z(m), gen_x(m));
        let g = rhd(&lj, en, &ym);
        let pl = bx(&lj, &rhd(&ll, &am, &bm));
        let dl = imp(&rhd(&ll, en, &zm), &rhd(&e(), en, &zm));
        let q = [g.clone(), pl.clone(), dl];

        let lemma = self.lemma_slim(m, &l);
        let thm = self.by_taut(&[], &[lemma], imp(&rhd(&ll, &am, &bm), &imp(&ym, &dia(&ll, &zm))));
        let rp = self.assume(&q, &pl);
        let rg = self.assume(&q, &g);
        let boxed = self.box_lift(&q, &lj, thm, &[rp]);
        let s1 = self.j2b(&q, rg, boxed);
        let s2 = self.j5(&q, s1);
        let p = self.discharge_with_ext(s2, &pl);
        let o = self.ded_out(p, &[g.clone(), xm.clone()]);
        self.by_taut(&[], &[o], imp(&g, &imp(&xm, &rhd(&e(), en, &zm))))
    }

    /// `⊢ X_n → Y_n ⊳ Z_n`.
    pub fn slim(&mut self, n: usize) -> usize {
        let k = self.fresh();
        let lemma = self.lemma_slim(n, &k);
        let (a, b, y, z) = (slim_a(n), slim_b_with_x(n, false), gen_y(n), gen_z(n));
        self.principle_from_lemma(&k, (&a, &b, &y, &z), lemma)
    }

    /// From `Γ, Δ, □^outer(A ⊳ B) ⊢ C` proves `Γ, A ⊳^label ◇B ⊢ C`, where
    /// `Δ` holds side hypotheses for the label `label·k`.
    pub fn gen_p0(
        &mut self,
        premise: usize,
        (label, outer, k): (&Label, &Label, &IVar),
        (a, b): (&Formula, &Formula),
        delta: &[Formula],
    ) -> usize {
        let lak = ext(label, k);
        let old = bx(outer, &rhd(&e(), a, b));
        let stronger = rhd(&lak, a, &dia(&e(), b));
        let new = bx(outer, &stronger);
        let j5 = self.ax(&[], Schema::J5, imp(&stronger, &rhd(&e(), a, b)));
        let lift = self.imp_lift(outer, j5);
        let out = self.ded_out(premise, std::slice::from_ref(&old));
        let ctx = self.context(out);
        let lift = self.weaken(lift, &ctx);
        let c = self.conclusion(premise);
        let chained = self.by_taut(&ctx, &[lift, out], imp(&new, &c));
        let back = self.ded_in(chained, 1);
        self.p_rule(back, &new, delta)
    }

    /// `⊢ D_n ⊳^l ◇¬C → V_n`.
    fn lemma_broad1(&mut self, n: usize, label: &Label) -> usize {
        let k = self.fresh();
        let lak = ext(label, &k);
        let (dn, c) = (broad_d(n), broad_c());
        let dnc = dia(&e(), &not(&c));
        let vn = gen_v(n).expect("n >= 1");
        let discharged = rhd(label, &dn, &dnc);
        if n == 1 {
            let ctx = [vn.clone()];
            let hyp = self.assume(&ctx, &vn);
            let p = self.gen_p0(hyp, (label, &e(), &k), (&dn, &not(&c)), &[]);
            return self.ded_out(p, &[discharged]);
        }
        let dm = broad_d(n - 1);
        let vm = gen_v(n - 1).expect("n >= 2");
        let step = rhd(&e(), &dm, &dn);
        let hyp = rhd(&lak, &dn, &dnc);
        let j2a = self.ax(&[], Schema::J2a, imp(&and(&step, &hyp), &rhd(&lak, &dm, &dnc)));
        let ih = self.lemma_broad1(n - 1, &lak);
        let thm = self.by_taut(&[], &[j2a, ih], imp(&hyp, &imp(&step, &vm)));
        let principal = bx(&e(), &hyp);
        let q = [principal.clone()];
        let boxed = self.assume(&q, &principal);
        let v = self.box_lift(&q, &e(), thm, &[boxed]);
        let p = self.p_rule(v, &principal, &[]);
        self.ded_out(p, &[discharged])
    }

    /// `⊢ V_n → ¬U_n`.
    fn v_excludes_u(&mut self, n: usize) -> usize {
        let (un, vn) = (gen_u(n).expect("n >= 1"), gen_v(n).expect("n >= 1"));
        let Formula::Box(_, inner) = &vn else { unreachable!() };
        let thm = if n == 1 {
            self.taut(&[], imp(inner, &not(&not(inner))))
        } else {
            let ih = self.v_excludes_u(n - 1);
            let step = rhd(&e(), &broad_d(n - 1), &broad_d(n));
            let um = gen_u(n - 1).expect("n >= 2");
            self.by_taut(&[], &[ih], imp(inner, &not(&and(&step, &um))))
        };
        let lift = self.imp_lift(&e(), thm);
        self.by_taut(&[], &[lift], imp(&vn, &not(&un)))
    }

    /// `⊢ (U_n ∧ (D_n ⊳ A)) ∧ (A ⊳^k B) ⊳^k B ∧ □C`.
    fn lemma_broad2(&mut self, n: usize, k: &IVar) -> usize {
        let lk = one(k);
        let (a, b, c, dn) = (broad_a(), broad_b(), broad_c(), broad_d(n));
        let lhs = broad_lhs(n);
        let h = rhd(&lk, &a, &b);
        let dnc = dia(&e(), &not(&c));
        let da = rhd(&e(), &dn, &a);
        let j2a = self.ax(&[], Schema::J2a, imp(&and(&da, &h), &rhd(&lk, &dn, &b)));
        let j2b = self.ax(
            &[],
            Schema::J2b,
            imp(&and(&rhd(&lk, &dn, &b), &bx(&lk, &imp(&b, &dnc))), &rhd(&lk, &dn, &dnc)),
        );
        let b1 = self.lemma_broad1(n, &lk);
        let vu = self.v_excludes_u(n);
        let lift = self.box_b_to_dia_not(&lk, &b, &c);
        let whole = and(&lhs, &h);
        let implication =
            self.by_taut(&[], &[j2a, j2b, b1, vu, lift], imp(&whole, &dia(&lk, &broad_target())));
        let boxed = self.nec(&e(), implication);
        let s = self.j1(&[], boxed);
        self.j5(&[], s)
    }

    /// `⊢ A ⊳ B → (U_n ∧ (D_n ⊳ A)) ⊳ B ∧ □C`; `n = 0` is the principle R.
    pub fn broad(&mut self, n: usize) -> usize {
        if n == 0 {
            return self.r(&broad_a(), &broad_b(), &broad_c());
        }
        let k = self.fresh();
        let lk = one(&k);
        let (a, b, t) = (broad_a(), broad_b(), broad_target());
        let lhs = broad_lhs(n);
        let h = rhd(&lk, &a, &b);
        let principal = bx(&e(), &h);
        let delta = imp(&rhd(&lk, &lhs, &t), &rhd(&e(), &lhs, &t));
        let q = [principal.clone(), delta];
        let hyp = self.assume(&q, &principal);
        let keep = self.box_taut(&q, &e(), &[hyp], imp(&lhs, &and(&lhs, &h)));
        let s1 = self.j1(&q, keep);
        let lemma = self.lemma_broad2(n, &k);
        let lemma = self.weaken(lemma, &q);
        let s2 = self.j2a(&q, s1, lemma);
        let p = self.discharge_with_ext(s2, &principal);
        self.ded_out(p, &[rhd(&e(), &a, &b)])
    }

    /// `⊢ ◇A ⊳ A`.
    pub fn dia_rhd(&mut self, a: &Formula) -> usize {
        let da = dia(&e(), a);
        let refl = self.taut(&[], imp(&da, &da));
        let refl = self.nec(&e(), refl);
        let s = self.j1(&[], refl);
        self.j5(&[], s)
    }

    /// `⊢ B ⊳ ◇C → B ⊳ C`, through `◇C ⊳ C` and transitivity.
    pub fn rhd_drop_dia(&mut self, b: &Formula, c: &Formula) -> usize {
        let hyp = rhd(&e(), b, &dia(&e(), c));
        let ctx = [hyp.clone()];
        let dc = self.dia_rhd(c);
        let dc = self.weaken(dc, &ctx);
        let h = self.assume(&ctx, &hyp);
        let s = self.j2a(&ctx, h, dc);
        self.ded_out(s, &ctx)
    }
}

fn run(f: impl FnOnce(&mut ProofBuilder) -> usize) -> Result<Derivation, SynthError> {
    let mut pb = ProofBuilder::new();
    let target = f(&mut pb);
    pb.finish(target)
}

fn letter(s: &str) -> Formula {
    Formula::var(s)
}

/// `⊢ a ⊳ b → a ⊳ b ∧ □¬a`.
pub fn derive_w() -> Result<Derivation, SynthError> {
    run(|pb| pb.w(&letter("a"), &letter("b")))
}

/// `⊢ a ⊳ b → (◇a ∧ □c) ⊳ (b ∧ □c)`.
pub fn derive_m0() -> Result<Derivation, SynthError> {
    run(|pb| pb.m0(&letter("a"), &letter("b"), &letter("c")))
}

/// `⊢ a ⊳ b → ¬(a ⊳ ¬c) ⊳ (b ∧ □c)`.
pub fn derive_r() -> Result<Derivation, SynthError> {
    run(|pb| pb.r(&broad_a(), &broad_b(), &broad_c()))
}

pub fn derive_slim(n: usize) -> Result<Derivation, SynthError> {
    run(|pb| pb.slim(n))
}

pub fn derive_broad(n: usize) -> Result<Derivation, SynthError> {
    run(|pb| pb.broad(n))
}

/// Both directions of the equivalence between `◇A ⊳ A` and `B ⊳ ◇C → B ⊳ C`.
pub fn derive_j5_equivalence() -> Result<(Derivation, Derivation), SynthError> {
    let forward = run(|pb| pb.dia_rhd(&letter("a")))?;
    let backward = run(|pb| pb.rhd_drop_dia(&letter("b"), &letter("c")))?;
    Ok((forward, backward))
}

/// Applies the generalized P-rule to an accepted derivation of
/// `Γ, Δ, □^outer(A ⊳ B) ⊢ C`. The side hypotheses `Δ` are the context
/// members shaped for `label·k`; `k` defaults to a variable the premise never uses.
pub fn derive_gen_p0(
    premise: &Derivation,
    label: &Label,
    outer: &Label,
    (a, b): (&Formula, &Formula),
    k: Option<IVar>,
) -> Result<Derivation, SynthError> {
    let report = check(premise);
    let theorem = match (report.accepted, report.theorem) {
        (true, Some(t)) => t,
        _ => return Err(SynthError::Premise("not accepted by the kernel".into())),
    };
    let old = bx(outer, &rhd(&e(), a, b));
    if !theorem.context().contains(&old) {
        return Err(SynthError::Premise(format!("context lacks {old}")));
    }
    let used = premise
        .lines
        .iter()
        .flat_map(|l| l.judgment.formulas().flat_map(|f| f.interp_vars()).collect::<Vec<_>>())
        .chain(label.vars().iter().map(|v| v.name().to_string()))
        .chain(outer.vars().iter().map(|v| v.name().to_string()));
    let mut supply = FreshSupply::avoiding(used);
    let k = k.unwrap_or_else(|| supply.next_var());
    let lak = ext(label, &k);
    let delta: Vec<Formula> =
        theorem.context().iter().filter(|f| is_side_hypothesis(f, label, &lak)).cloned().collect();
    let mut pb = ProofBuilder::with_supply(supply);
    let last = pb.import(premise);
    let target = pb.gen_p0(last, (label, outer, &k), (a, b), &delta);
    pb.finish(target)
}

fn is_side_hypothesis(f: &Formula, label: &Label, lak: &Label) -> bool {
    let Some((x, y)) = f.as_implies() else { return false };
    match (x, y) {
        (Formula::Rhd(l1, a1, b1), Formula::Rhd(l2, a2, b2)) => {
            l1 == lak && l2 == label && a1 == a2 && b1 == b2
        }
        (Formula::Box(l1, a1), Formula::Box(l2, a2)) => l1 == label && l2 == lak && a1 == a2,
        _ => false,
    }
}
