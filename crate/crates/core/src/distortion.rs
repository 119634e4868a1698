//! Harmful distortions of a linear order.
//!
//! The `i`-th distortion keeps everything below the top `i` alternatives in
//! place, moves those `i` alternatives to the bottom and reverses them. Index
//! 0 is the order itself and index `n - 1` is its full reverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Alt, LinearOrder};

/// Position of `a` in the `i`-th distortion of `order`, without building it.
pub fn distorted_position(order: &LinearOrder, i: usize, a: Alt) -> usize {
    let p = order.position(a);
    if p >= i {
        p - i
    } else {
        order.n() - 1 - p
    }
}

pub fn harmful_distortion(order: &LinearOrder, i: usize) -> Result<LinearOrder> {
    let n = order.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let ranking = order.ranking();
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&ranking[i..]);
    out.extend(ranking[..i].iter().rev());
    LinearOrder::new(out)
}

/// All `n` harmful distortions of a base order, index 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistortionFamily {
    base: LinearOrder,
    members: Vec<LinearOrder>,
}

impl DistortionFamily {
    pub fn base(&self) -> &LinearOrder {
        &self.base
    }

    pub fn members(&self) -> &[LinearOrder] {
        &self.members
    }

    pub fn get(&self, i: usize) -> Option<&LinearOrder> {
        self.members.get(i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn harm_family(order: &LinearOrder) -> DistortionFamily {
    let members = (0..order.n())
        .map(|i| harmful_distortion(order, i).expect("index below n"))
        .collect();
    DistortionFamily {
        base: order.clone(),
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroundSet;

    fn labels(g: &GroundSet, o: &LinearOrder) -> String {
        g.order_labels(o).join(">")
    }

    #[test]
    fn projects_distortions() {
        let g = GroundSet::new(["h", "mh", "ml", "l"]).unwrap();
        let o = g.parse_order("h,mh,ml,l").unwrap();
        assert_eq!(labels(&g, &harmful_distortion(&o, 1).unwrap()), "mh>ml>l>h");
        assert_eq!(labels(&g, &harmful_distortion(&o, 2).unwrap()), "ml>l>mh>h");
        assert_eq!(harmful_distortion(&o, 0).unwrap(), o);
    }

    #[test]
    fn food_distortion() {
        let g = GroundSet::new(["l", "r", "s"]).unwrap();
        let o = g.parse_order("l,r,s").unwrap();
        assert_eq!(labels(&g, &harmful_distortion(&o, 2).unwrap()), "s>r>l");
    }

    #[test]
    fn donation_family() {
        let g = GroundSet::new(["0", "5", "20"]).unwrap();
        let fam = harm_family(&g.parse_order("0,5,20").unwrap());
        let got: Vec<String> = fam.members().iter().map(|o| labels(&g, o)).collect();
        assert_eq!(got, ["0>5>20", "5>20>0", "20>5>0"]);
    }

    #[test]
    fn xzy_top_two_block() {
        let g = GroundSet::new(["x", "y", "z"]).unwrap();
        let fam = harm_family(&g.parse_order("x,z,y").unwrap());
        assert_eq!(labels(&g, &fam.members()[2]), "y>z>x");
    }

    #[test]
    fn singleton_family() {
        let fam = harm_family(&LinearOrder::identity(1));
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.members()[0], LinearOrder::identity(1));
    }

    #[test]
    fn index_is_validated_not_clamped() {
        let o = LinearOrder::identity(4);
        assert_eq!(
            harmful_distortion(&o, 4),
            Err(Error::IndexOutOfRange { index: 4, n: 4 })
        );
    }

    #[test]
    fn position_shortcut_matches_materialized_order() {
        let o = LinearOrder::new(vec![3, 1, 4, 0, 2]).unwrap();
        for i in 0..5 {
            let d = harmful_distortion(&o, i).unwrap();
            for a in 0..5 {
                assert_eq!(distorted_position(&o, i, a), d.position(a));
            }
        }
    }
}
