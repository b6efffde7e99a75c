//! Geometry of the periodic `L × L` square lattice: sites, oriented links,
//! plaquettes, stars, winding loops, twist strips, ladder strips and
//! open string paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice size must be at least 2 (got {0})")]
    TooSmall(usize),
    #[error("ladder end plaquettes must differ")]
    SamePlaquette,
    #[error("ladder end plaquettes must lie in the same row")]
    DifferentRows,
    #[error("string endpoints must differ")]
    SameSite,
}

/// Lattice direction; `X` is `1̂`, `Y` is `2̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    X,
    Y,
}

impl Dir {
    pub fn index(self) -> usize {
        match self {
            Dir::X => 0,
            Dir::Y => 1,
        }
    }

    pub fn other(self) -> Dir {
        match self {
            Dir::X => Dir::Y,
            Dir::Y => Dir::X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: usize,
    pub y: usize,
}

/// Link `(n; î)` from site `n` to `n + î`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkId {
    pub site: Site,
    pub dir: Dir,
}

/// A link traversed forwards (`U`) or backwards (`U†`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedLink {
    pub link: LinkId,
    pub forward: bool,
}

/// Plaquette labelled by its lower-left corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaquetteId {
    pub base: Site,
}

/// Which end of a link touches a star: the left end (the link leaves the
/// site, rotated by `E₊`) or the right end (the link enters, `E₋`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkEnd {
    Left,
    Right,
}

/// Horizontal ladder of vertical rungs between two plaquettes of one row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderStrip {
    /// Bottom site of rung 0.
    pub base: Site,
    /// Number of rungs.
    pub length: usize,
    /// Vertical links `(x0 + s, y0; 2)`, `s = 0 … length−1`.
    pub rungs: Vec<LinkId>,
    /// Horizontal links `(x0 + h, y0; 1)`, `h = 0 … length−2`, joining
    /// consecutive rung bottoms.
    pub rails: Vec<LinkId>,
    /// Plaquettes strictly between the end plaquettes.
    pub middle: Vec<PlaquetteId>,
    pub ends: (PlaquetteId, PlaquetteId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusLattice {
    l: usize,
}

impl TorusLattice {
    pub fn new(l: usize) -> Result<Self, LatticeError> {
        if l < 2 {
            return Err(LatticeError::TooSmall(l));
        }
        Ok(Self { l })
    }

    pub fn size(&self) -> usize {
        self.l
    }

    pub fn num_sites(&self) -> usize {
        self.l * self.l
    }

    pub fn num_links(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn num_plaquettes(&self) -> usize {
        self.l * self.l
    }

    fn wrap(&self, v: isize) -> usize {
        v.rem_euclid(self.l as isize) as usize
    }

    pub fn site(&self, x: isize, y: isize) -> Site {
        Site { x: self.wrap(x), y: self.wrap(y) }
    }

    pub fn shift(&self, s: Site, dir: Dir, by: isize) -> Site {
        match dir {
            Dir::X => self.site(s.x as isize + by, s.y as isize),
            Dir::Y => self.site(s.x as isize, s.y as isize + by),
        }
    }

    pub fn link(&self, x: isize, y: isize, dir: Dir) -> LinkId {
        LinkId { site: self.site(x, y), dir }
    }

    pub fn plaquette(&self, x: isize, y: isize) -> PlaquetteId {
        PlaquetteId { base: self.site(x, y) }
    }

    pub fn site_index(&self, s: Site) -> usize {
        s.y * self.l + s.x
    }

    pub fn site_from_index(&self, i: usize) -> Site {
        Site { x: i % self.l, y: i / self.l }
    }

    /// Links are enumerated as `2·(y·L + x) + (dir − 1)`.
    pub fn link_index(&self, link: LinkId) -> usize {
        2 * self.site_index(link.site) + link.dir.index()
    }

    pub fn link_from_index(&self, i: usize) -> LinkId {
        let dir = if i % 2 == 0 { Dir::X } else { Dir::Y };
        LinkId { site: self.site_from_index(i / 2), dir }
    }

    pub fn plaquette_index(&self, p: PlaquetteId) -> usize {
        self.site_index(p.base)
    }

    pub fn plaquette_from_index(&self, i: usize) -> PlaquetteId {
        PlaquetteId { base: self.site_from_index(i) }
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(|i| self.site_from_index(i))
    }

    pub fn links(&self) -> impl Iterator<Item = LinkId> + '_ {
        (0..self.num_links()).map(|i| self.link_from_index(i))
    }

    pub fn plaquettes(&self) -> impl Iterator<Item = PlaquetteId> + '_ {
        (0..self.num_plaquettes()).map(|i| self.plaquette_from_index(i))
    }

    /// Start and end sites of a directed link.
    pub fn endpoints(&self, d: DirectedLink) -> (Site, Site) {
        let a = d.link.site;
        let b = self.shift(a, d.link.dir, 1);
        if d.forward {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// `U(n;1) U(n+1̂;2) U†(n+2̂;1) U†(n;2)`.
    pub fn plaquette_links(&self, p: PlaquetteId) -> [DirectedLink; 4] {
        let n = p.base;
        let right = self.shift(n, Dir::X, 1);
        let up = self.shift(n, Dir::Y, 1);
        [
            DirectedLink { link: LinkId { site: n, dir: Dir::X }, forward: true },
            DirectedLink { link: LinkId { site: right, dir: Dir::Y }, forward: true },
            DirectedLink { link: LinkId { site: up, dir: Dir::X }, forward: false },
            DirectedLink { link: LinkId { site: n, dir: Dir::Y }, forward: false },
        ]
    }

    /// Outgoing `(n;1), (n;2)` then incoming `(n−1̂;1), (n−2̂;2)`.
    pub fn star_links(&self, s: Site) -> [(LinkId, LinkEnd); 4] {
        [
            (LinkId { site: s, dir: Dir::X }, LinkEnd::Left),
            (LinkId { site: s, dir: Dir::Y }, LinkEnd::Left),
            (LinkId { site: self.shift(s, Dir::X, -1), dir: Dir::X }, LinkEnd::Right),
            (LinkId { site: self.shift(s, Dir::Y, -1), dir: Dir::Y }, LinkEnd::Right),
        ]
    }

    /// Closed path of `L` forward links winding once in `dir`, starting at `base`.
    pub fn noncontractible_loop(&self, dir: Dir, base: Site) -> Vec<DirectedLink> {
        (0..self.l as isize)
            .map(|k| DirectedLink { link: LinkId { site: self.shift(base, dir, k), dir }, forward: true })
            .collect()
    }

    /// The strip of parallel links cut by a noncontractible dual line.
    ///
    /// `Dir::Y` gives `𝒮_y`: the horizontal links `(offset, y; 1)` for all `y`,
    /// crossed once by every x-winding loop. `Dir::X` gives `𝒮_x`: the
    /// vertical links `(x, offset; 2)` for all `x`.
    pub fn twist_strip(&self, dir: Dir, offset: usize) -> Vec<LinkId> {
        let o = offset % self.l;
        (0..self.l)
            .map(|k| match dir {
                Dir::Y => LinkId { site: Site { x: o, y: k }, dir: Dir::X },
                Dir::X => LinkId { site: Site { x: k, y: o }, dir: Dir::Y },
            })
            .collect()
    }

    /// Horizontal ladder from `p1` to `p2` (same row, `p2` to the right of `p1`
    /// by `k` columns modulo `L`). It has `k` rungs: the vertical links shared
    /// by consecutive plaquettes between the two ends.
    pub fn ladder_strip(&self, p1: PlaquetteId, p2: PlaquetteId) -> Result<LadderStrip, LatticeError> {
        if p1 == p2 {
            return Err(LatticeError::SamePlaquette);
        }
        if p1.base.y != p2.base.y {
            return Err(LatticeError::DifferentRows);
        }
        let k = self.wrap(p2.base.x as isize - p1.base.x as isize);
        let y0 = p1.base.y as isize;
        let x0 = p1.base.x as isize + 1;
        let rungs = (0..k as isize).map(|s| self.link(x0 + s, y0, Dir::Y)).collect();
        let rails = (0..k.saturating_sub(1) as isize).map(|h| self.link(x0 + h, y0, Dir::X)).collect();
        let middle = (0..k.saturating_sub(1) as isize).map(|h| self.plaquette(x0 + h, y0)).collect();
        Ok(LadderStrip { base: self.site(x0, y0), length: k, rungs, rails, middle, ends: (p1, p2) })
    }

    fn straight(&self, from: Site, dir: Dir, steps: isize) -> (Vec<DirectedLink>, Site) {
        let mut path = Vec::new();
        let mut cur = from;
        for _ in 0..steps.unsigned_abs() {
            if steps > 0 {
                path.push(DirectedLink { link: LinkId { site: cur, dir }, forward: true });
                cur = self.shift(cur, dir, 1);
            } else {
                let prev = self.shift(cur, dir, -1);
                path.push(DirectedLink { link: LinkId { site: prev, dir }, forward: false });
                cur = prev;
            }
        }
        (path, cur)
    }

    /// Signed shortest displacement from `a` to `b` along one axis (ties go positive).
    fn displacement(&self, a: usize, b: usize) -> isize {
        let l = self.l as isize;
        let d = (b as isize - a as isize).rem_euclid(l);
        if d * 2 > l {
            d - l
        } else {
            d
        }
    }

    /// Path from `from` to `to`: first along x, then along y (shortest way round).
    pub fn string_path(&self, from: Site, to: Site) -> Result<Vec<DirectedLink>, LatticeError> {
        self.string_path_ordered(from, to, [Dir::X, Dir::Y])
    }

    /// Same endpoints as [`Self::string_path`] but y first, then x.
    pub fn string_path_column_first(&self, from: Site, to: Site) -> Result<Vec<DirectedLink>, LatticeError> {
        self.string_path_ordered(from, to, [Dir::Y, Dir::X])
    }

    fn string_path_ordered(&self, from: Site, to: Site, order: [Dir; 2]) -> Result<Vec<DirectedLink>, LatticeError> {
        if from == to {
            return Err(LatticeError::SameSite);
        }
        let mut path = Vec::new();
        let mut cur = from;
        for dir in order {
            let steps = match dir {
                Dir::X => self.displacement(cur.x, to.x),
                Dir::Y => self.displacement(cur.y, to.y),
            };
            let (seg, end) = self.straight(cur, dir, steps);
            path.extend(seg);
            cur = end;
        }
        Ok(path)
    }

    /// Follows a path and returns its final site, or `None` if it is broken.
    pub fn walk(&self, start: Site, path: &[DirectedLink]) -> Option<Site> {
        let mut cur = start;
        for d in path {
            let (a, b) = self.endpoints(*d);
            if a != cur {
                return None;
            }
            cur = b;
        }
        Some(cur)
    }

    /// Serializable description of the lattice and the strips in use.
    pub fn layout(&self, ladder: Option<&LadderStrip>) -> LatticeLayout {
        LatticeLayout {
            size: self.l,
            sites: self.sites().collect(),
            links: self.links().collect(),
            plaquettes: self.plaquettes().map(|p| (p, self.plaquette_links(p))).collect(),
            strip_x: self.twist_strip(Dir::X, 0),
            strip_y: self.twist_strip(Dir::Y, 0),
            ladder: ladder.cloned(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeLayout {
    pub size: usize,
    pub sites: Vec<Site>,
    pub links: Vec<LinkId>,
    pub plaquettes: Vec<(PlaquetteId, [DirectedLink; 4])>,
    pub strip_x: Vec<LinkId>,
    pub strip_y: Vec<LinkId>,
    pub ladder: Option<LadderStrip>,
}
