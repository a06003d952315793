use std::sync::Arc;

use super::DoubleMorphism;
use crate::double::{Dir, DoubleGC, DoubleGCBuilder, Edge, Kind, Obj, Sign, Sq};

/// Disjoint union, with every name of the `i`-th summand prefixed `i:`.
/// The result is a groupoid when every summand is (or there are none).
pub fn coproduct(parts: &[Arc<DoubleGC>]) -> (Arc<DoubleGC>, Vec<DoubleMorphism>) {
    let kind = if parts.iter().all(|p| p.is_groupoid()) { Kind::Groupoid } else { Kind::Category };
    let mut b = DoubleGCBuilder::new(kind);
    for (i, d) in parts.iter().enumerate() {
        let on = |n: &str| format!("{i}:{n}");
        for x in d.objects() {
            b.object(&on(d.obj_name(x)));
        }
        for e in d.edges() {
            b.edge(&on(d.edge_name(e)), &on(d.obj_name(d.src(e))), &on(d.obj_name(d.tgt(e))));
        }
        for s in d.squares() {
            let side = |e: Edge| on(d.edge_name(e));
            b.square(&on(d.sq_name(s)), &side(d.top(s)), &side(d.bottom(s)), &side(d.left(s)), &side(d.right(s)));
        }
        for x in d.objects() {
            b.eps(&on(d.obj_name(x)), &on(d.edge_name(d.eps(x))));
        }
        for (p, q, r) in d.edge_compose_entries() {
            b.compose_edge(&on(d.edge_name(p)), &on(d.edge_name(q)), &on(d.edge_name(r)));
        }
        for dir in Dir::BOTH {
            for (p, q, r) in d.compose_entries(dir) {
                b.compose(dir, &on(d.sq_name(p)), &on(d.sq_name(q)), &on(d.sq_name(r)));
            }
        }
        for e in d.edges() {
            let n = on(d.edge_name(e));
            b.eps1(&n, &on(d.sq_name(d.eps1(e))));
            b.eps2(&n, &on(d.sq_name(d.eps2(e))));
            for sign in Sign::BOTH {
                b.gamma(sign, &n, &on(d.sq_name(d.gamma(sign, e))));
            }
        }
    }
    let sum = Arc::new(b.build().expect("disjoint union of well-formed models"));
    let mut inj = Vec::with_capacity(parts.len());
    let (mut o, mut e, mut s) = (0u32, 0u32, 0u32);
    for d in parts {
        let f0 = (0..d.num_objects() as u32).map(|k| Obj(o + k)).collect();
        let f1 = (0..d.num_edges() as u32).map(|k| Edge(e + k)).collect();
        let f2 = (0..d.num_squares() as u32).map(|k| Sq(s + k)).collect();
        inj.push(DoubleMorphism::new(d.clone(), sum.clone(), f0, f1, f2).expect("injection is total"));
        o += d.num_objects() as u32;
        e += d.num_edges() as u32;
        s += d.num_squares() as u32;
    }
    (sum, inj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimits::validate_morphism;
    use crate::models::{cyclic_group, square_model};
    use crate::validate::validate;

    #[test]
    fn counts_and_injections() {
        let z2 = Arc::new(square_model(&cyclic_group(2)));
        let z3 = Arc::new(square_model(&cyclic_group(3)));
        let (sum, inj) = coproduct(&[z2.clone(), z3.clone()]);
        assert_eq!((sum.num_objects(), sum.num_edges(), sum.num_squares()), (2, 5, 35));
        assert!(validate(&sum).is_ok());
        for f in &inj {
            assert!(validate_morphism(f).is_ok());
        }
        assert_eq!(sum.edge_name(inj[1].edge(Edge(2))), "1:2");
    }

    #[test]
    fn empty_and_single() {
        let (empty, inj) = coproduct(&[]);
        assert_eq!(empty.num_objects(), 0);
        assert!(inj.is_empty());
        let z2 = Arc::new(square_model(&cyclic_group(2)));
        let (one, _) = coproduct(std::slice::from_ref(&z2));
        assert_eq!(one.num_squares(), z2.num_squares());
    }
}
