//! The gluing harness: rebuild `⊡C` from the pieces of a cover of its
//! objects and compare.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{coequalise, coproduct, iso_check, pushout, ColimitError, DoubleMorphism, QuotientResult, QuotientStatus};
use crate::double::{DoubleGC, Obj};
use crate::models::{full_sub_double, square_model, FiniteCategory};
use crate::report::Report;

/// The parallel pair of a cover: `A = ⊔ ⊡(U∩V)` over ordered pairs with a
/// nonempty intersection, `B = ⊔ ⊡U`.
#[derive(Clone, Debug)]
pub struct CoverDiagram {
    pub whole: Arc<DoubleGC>,
    pub pieces: Vec<Arc<DoubleGC>>,
    pub a: DoubleMorphism,
    pub b: DoubleMorphism,
    /// The canonical map `B → ⊡C` assembled from the inclusions.
    pub canonical: DoubleMorphism,
    pub pairs: Vec<(usize, usize)>,
}

/// Relabels a morphism into `sub` as one into `target`, matching by name.
fn via_names(src: &Arc<DoubleGC>, target: &Arc<DoubleGC>) -> DoubleMorphism {
    DoubleMorphism::new(
        src.clone(),
        target.clone(),
        src.objects().map(|x| target.obj_by_name(src.obj_name(x)).expect("object present")).collect(),
        src.edges().map(|e| target.edge_by_name(src.edge_name(e)).expect("edge present")).collect(),
        src.squares().map(|s| target.sq_by_name(src.sq_name(s)).expect("square present")).collect(),
    )
    .expect("name-matched maps are total")
}

/// Assembles `[g_0, g_1, ...]: ⊔ X_i → Y` from maps on the summands.
fn copair(sum: &Arc<DoubleGC>, inj: &[DoubleMorphism], maps: &[DoubleMorphism], target: &Arc<DoubleGC>) -> DoubleMorphism {
    let mut f0 = vec![Obj(0); sum.num_objects()];
    let mut f1 = vec![crate::double::Edge(0); sum.num_edges()];
    let mut f2 = vec![crate::double::Sq(0); sum.num_squares()];
    for (i, g) in inj.iter().zip(maps) {
        let s = i.source();
        for x in s.objects() {
            f0[i.obj(x).index()] = g.obj(x);
        }
        for e in s.edges() {
            f1[i.edge(e).index()] = g.edge(e);
        }
        for q in s.squares() {
            f2[i.sq(q).index()] = g.sq(q);
        }
    }
    DoubleMorphism::new(sum.clone(), target.clone(), f0, f1, f2).expect("copairing is total")
}

pub fn cover_diagram(c: &FiniteCategory, cover: &[Vec<usize>]) -> Result<CoverDiagram, ColimitError> {
    let whole = Arc::new(square_model(c));
    let covered: BTreeSet<usize> = cover.iter().flatten().copied().collect();
    if covered != (0..c.num_objects()).collect() || cover.iter().flatten().any(|&x| x >= c.num_objects()) {
        return Err(ColimitError::InputMismatch("the cover does not consist of subsets covering every object".into()));
    }
    let objs = |u: &[usize]| -> Vec<Obj> {
        let set: BTreeSet<usize> = u.iter().copied().collect();
        set.into_iter().map(|x| whole.obj_by_name(&c.objects()[x]).expect("object of the square model")).collect()
    };
    let pieces: Vec<Arc<DoubleGC>> = cover.iter().map(|u| full_sub_double(&whole, &objs(u)).0).collect();
    let (bsum, binj) = coproduct(&pieces);

    let mut pairs = Vec::new();
    let mut meets = Vec::new();
    for (i, u) in cover.iter().enumerate() {
        for (j, v) in cover.iter().enumerate() {
            let w: Vec<usize> = u.iter().filter(|x| v.contains(x)).copied().collect();
            if !w.is_empty() {
                pairs.push((i, j));
                meets.push(full_sub_double(&whole, &objs(&w)).0);
            }
        }
    }
    let (asum, ainj) = coproduct(&meets);
    let side = |pick: fn(&(usize, usize)) -> usize| -> Result<DoubleMorphism, ColimitError> {
        let maps: Vec<DoubleMorphism> = pairs
            .iter()
            .zip(&meets)
            .map(|(p, m)| {
                let k = pick(p);
                via_names(m, &pieces[k]).then(&binj[k])
            })
            .collect::<Result<_, _>>()?;
        Ok(copair(&asum, &ainj, &maps, &bsum))
    };
    let a = side(|p| p.0)?;
    let b = side(|p| p.1)?;
    let incl: Vec<DoubleMorphism> = pieces.iter().map(|p| via_names(p, &whole)).collect();
    let canonical = copair(&bsum, &binj, &incl, &whole);
    Ok(CoverDiagram { whole, pieces, a, b, canonical, pairs })
}

/// Outcome of the gluing harness.
#[derive(Clone, Debug)]
pub struct VkOutcome {
    pub diagram: CoverDiagram,
    pub quotient: QuotientResult,
    pub report: Report,
}

/// Coequalises the cover diagram of `c` and compares the result with `⊡C`.
/// For two-set covers the pushout of `⊡U ← ⊡(U∩V) → ⊡V` is compared too.
pub fn vk_harness(c: &FiniteCategory, cover: &[Vec<usize>], budget: usize) -> Result<VkOutcome, ColimitError> {
    let diagram = cover_diagram(c, cover)?;
    let q = coequalise(&diagram.a, &diagram.b, budget)?;
    let mut r = Report::new("vk");
    r.set("status", status_name(q.status));
    r.set("pieces", diagram.pieces.len());
    r.set("intersections", diagram.pairs.len());
    r.set("generators_added", q.generators_added);
    r.set("rounds", q.rounds);
    r.set("live_edges", q.live_edges);
    r.set("live_squares", q.live_squares);
    if let Some(obj) = &q.object {
        let iso = iso_check(obj, &diagram.whole);
        r.record("iso-to-whole", iso.is_some(), || {
            vec![format!("quotient {}/{}/{}", obj.num_objects(), obj.num_edges(), obj.num_squares())]
        });
        let proj = q.projection.as_ref().expect("finite quotient has a projection");
        let pa = diagram.a.then(proj)?;
        let pb = diagram.b.then(proj)?;
        r.record("projection-coequalises", pa.same_maps(&pb), Vec::new);
        let factored = super::factor_through(&q, &diagram.canonical);
        let ok = factored.as_ref().is_ok_and(is_bijective);
        r.record("canonical-map-is-iso", ok, || vec![format!("{:?}", factored.as_ref().err())]);
        r.set("quotient_objects", obj.num_objects());
        r.set("quotient_edges", obj.num_edges());
        r.set("quotient_squares", obj.num_squares());
    } else {
        r.note("budget-exceeded", vec![format!("budget={budget}")]);
    }
    if cover.len() == 2 {
        let u = &diagram.pieces[0];
        let v = &diagram.pieces[1];
        let w: Vec<usize> = cover[0].iter().filter(|x| cover[1].contains(x)).copied().collect();
        if !w.is_empty() {
            let objs: Vec<Obj> = w.iter().map(|&x| diagram.whole.obj_by_name(&c.objects()[x]).expect("object")).collect();
            let (meet, _) = full_sub_double(&diagram.whole, &objs);
            let p = pushout(&via_names(&meet, u), &via_names(&meet, v), budget)?;
            r.set("pushout_status", status_name(p.quotient.status));
            if let (Some(po), Some(co)) = (&p.quotient.object, &q.object) {
                r.record("pushout-agrees", iso_check(po, co).is_some(), Vec::new);
            } else {
                r.record("pushout-agrees", p.quotient.status == q.status, Vec::new);
            }
        }
    }
    Ok(VkOutcome { diagram, quotient: q, report: r })
}

fn is_bijective(f: &DoubleMorphism) -> bool {
    let distinct = |v: Vec<u32>, n: usize| v.len() == n && v.into_iter().collect::<BTreeSet<_>>().len() == n;
    let t = f.target();
    distinct(f.object_map().iter().map(|x| x.0).collect(), t.num_objects())
        && distinct(f.edge_map().iter().map(|x| x.0).collect(), t.num_edges())
        && distinct(f.square_map().iter().map(|x| x.0).collect(), t.num_squares())
}

pub fn status_name(s: QuotientStatus) -> &'static str {
    match s {
        QuotientStatus::Finite => "finite",
        QuotientStatus::BudgetExceeded => "budget_exceeded",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimits::DEFAULT_BUDGET;
    use crate::models::{cyclic_group, disjoint_union, indiscrete_groupoid};

    #[test]
    fn single_set_cover() {
        let out = vk_harness(&cyclic_group(2), &[vec![0]], DEFAULT_BUDGET).unwrap();
        assert!(out.report.is_ok(), "{}", out.report.to_text());
        assert_eq!(out.quotient.generators_added, 0);
    }

    #[test]
    fn components_cover() {
        let c = disjoint_union(&cyclic_group(2), &cyclic_group(3));
        let out = vk_harness(&c, &[vec![0], vec![1]], DEFAULT_BUDGET).unwrap();
        assert!(out.quotient.is_finite());
        assert!(out.report.is_ok(), "{}", out.report.to_text());
    }

    #[test]
    fn indiscrete_three_by_two_sets() {
        let out = vk_harness(&indiscrete_groupoid(3), &[vec![0, 1], vec![1, 2]], DEFAULT_BUDGET).unwrap();
        assert!(out.quotient.is_finite());
        assert!(out.report.is_ok(), "{}", out.report.to_text());
    }

    #[test]
    fn bad_cover_is_rejected() {
        assert!(vk_harness(&indiscrete_groupoid(3), &[vec![0, 1]], 10).is_err());
    }
}
