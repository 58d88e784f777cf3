//! Permutational wreath products `A ≀_X G` with a finite lamp group `A`.
//!
//! An element is a pair `(f, g)` with `f: X → A` finitely supported. The product is
//! `(f₁, g₁)(f₂, g₂) = (x ↦ f₁(x)·f₂(x·g₁), g₁g₂)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::Element;
use crate::boundary::Point;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupA {
    name: String,
    table: Vec<Vec<u8>>,
    inv: Vec<u8>,
    identity: u8,
}

impl FiniteGroupA {
    pub fn from_table(name: &str, table: Vec<Vec<u8>>) -> Result<FiniteGroupA> {
        let n = table.len();
        if n == 0 || n > 255 {
            return Err(Error::InvalidGroupTable(format!("order {n} out of range")));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return Err(Error::InvalidGroupTable("table is not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| Error::InvalidGroupTable("no identity".into()))? as u8;
        let mut inv = vec![0u8; n];
        for x in 0..n {
            inv[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("{x} has no inverse")))? as u8;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = table[table[x][y] as usize][z];
                    let r = table[x][table[y][z] as usize];
                    if l != r {
                        return Err(Error::InvalidGroupTable(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(FiniteGroupA { name: name.to_string(), table, inv, identity })
    }

    pub fn cyclic(n: u8) -> FiniteGroupA {
        let n = n.max(1) as usize;
        let table = (0..n).map(|x| (0..n).map(|y| ((x + y) % n) as u8).collect()).collect();
        FiniteGroupA::from_table(&format!("C{n}"), table).expect("cyclic table is a group")
    }

    /// The symmetric group on three letters, elements indexed by permutations in lexicographic order.
    pub fn symmetric3() -> FiniteGroupA {
        let perms: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [u8; 3]| perms.iter().position(|q| *q == p).unwrap() as u8;
        // left-to-right composition: (xy)(i) = y(x(i))
        let table = perms
            .iter()
            .map(|x| perms.iter().map(|y| idx([y[x[0] as usize], y[x[1] as usize], y[x[2] as usize]])).collect())
            .collect();
        FiniteGroupA::from_table("S3", table).expect("S3 table is a group")
    }

    pub fn by_name(name: &str) -> Result<FiniteGroupA> {
        match name {
            "S3" => Ok(FiniteGroupA::symmetric3()),
            _ => name
                .strip_prefix('C')
                .and_then(|n| n.parse::<u8>().ok())
                .filter(|&n| n >= 1)
                .map(FiniteGroupA::cyclic)
                .ok_or_else(|| Error::InvalidGroupTable(format!("unknown group {name:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> u8 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.table[x as usize][y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u8) -> u8 {
        self.inv[x as usize]
    }
}

pub struct WreathElement<P: Point> {
    group: Arc<FiniteGroupA>,
    lamps: BTreeMap<P, u8>,
    base: P::Actor,
}

impl<P: Point> Clone for WreathElement<P> {
    fn clone(&self) -> Self {
        WreathElement { group: self.group.clone(), lamps: self.lamps.clone(), base: self.base.clone() }
    }
}

impl<P: Point> fmt::Debug for WreathElement<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WreathElement").field("lamps", &self.lamps).field("base", &self.base.label()).finish()
    }
}

impl<P: Point> WreathElement<P> {
    /// The element `(0, g)`.
    pub fn from_base(group: &Arc<FiniteGroupA>, g: P::Actor) -> Self {
        WreathElement { group: group.clone(), lamps: BTreeMap::new(), base: g }
    }

    /// The element `(δ_p^value, 1)`.
    pub fn lamp(group: &Arc<FiniteGroupA>, identity: P::Actor, p: P, value: u8) -> Self {
        let mut lamps = BTreeMap::new();
        if value != group.identity() {
            lamps.insert(p, value);
        }
        WreathElement { group: group.clone(), lamps, base: identity }
    }

    pub fn lamps(&self) -> &BTreeMap<P, u8> {
        &self.lamps
    }

    pub fn base(&self) -> &P::Actor {
        &self.base
    }

    pub fn group(&self) -> &FiniteGroupA {
        &self.group
    }

    pub fn lamp_at(&self, p: &P) -> u8 {
        self.lamps.get(p).copied().unwrap_or(self.group.identity())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let a = &self.group;
        let g1_inv = self.base.inverse();
        let mut lamps = self.lamps.clone();
        for (y, &v) in &other.lamps {
            let x = y.act(&g1_inv);
            let cur = lamps.get(&x).copied().unwrap_or(a.identity());
            let new = a.mul(cur, v);
            if new == a.identity() {
                lamps.remove(&x);
            } else {
                lamps.insert(x, new);
            }
        }
        WreathElement { group: self.group.clone(), lamps, base: self.base.compose(&other.base) }
    }

    /// `(f, g)⁻¹ = (x ↦ f(x·g⁻¹)⁻¹, g⁻¹)`.
    pub fn inverse(&self) -> Self {
        let g_inv = self.base.inverse();
        let lamps = self.lamps.iter().map(|(y, &v)| (y.act(&self.base), self.group.inv(v))).collect();
        WreathElement { group: self.group.clone(), lamps, base: g_inv }
    }

    pub fn canonical_key(&self) -> (Vec<(P, u8)>, <P::Actor as Element>::Key) {
        (self.lamps.iter().map(|(p, &v)| (p.clone(), v)).collect(), self.base.key())
    }
}

impl<P: Point> Element for WreathElement<P> {
    type Key = (Vec<(P, u8)>, <P::Actor as Element>::Key);

    fn key(&self) -> Self::Key {
        self.canonical_key()
    }

    fn compose(&self, other: &Self) -> Self {
        self.multiply(other)
    }

    fn inverse(&self) -> Self {
        WreathElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.base.is_identity()
    }

    fn label(&self) -> String {
        let lamps: Vec<String> = self.lamps.iter().map(|(p, v)| format!("{}:{v}", p.encode())).collect();
        format!("[{}]{}", lamps.join(";"), self.base.label())
    }

    fn size(&self) -> usize {
        self.lamps.len() + self.base.size()
    }
}

/// Lamp generators `value` at each orbit representative, then the base generators with no lamps.
pub fn standard_generators<P: Point>(
    group: &Arc<FiniteGroupA>,
    lamp_gens: &[u8],
    base_gens: &[(String, P::Actor)],
    identity: P::Actor,
    orbit_reps: &[P],
) -> Result<Vec<(String, WreathElement<P>)>> {
    if group.order() < 2 {
        return Err(Error::InvalidParameter("lamp group is trivial".into()));
    }
    if base_gens.is_empty() || orbit_reps.is_empty() {
        return Err(Error::InvalidParameter("need base generators and an orbit representative".into()));
    }
    if lamp_gens.iter().any(|&v| v as usize >= group.order()) {
        return Err(Error::InvalidParameter("lamp generator outside the group".into()));
    }
    let mut out = Vec::new();
    for (k, p) in orbit_reps.iter().enumerate() {
        for &v in lamp_gens.iter().filter(|&&v| v != group.identity()) {
            out.push((format!("t{v}@{k}"), WreathElement::lamp(group, identity.clone(), p.clone(), v)));
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("every lamp generator is the identity".into()));
    }
    out.extend(base_gens.iter().map(|(name, g)| (name.clone(), WreathElement::from_base(group, g.clone()))));
    Ok(out)
}
