//! Venue geometry and line-of-sight occlusion.
//!
//! Buildings are axis-aligned boxes standing on the ground plane. A link
//! between the UAV and a ground user is line-of-sight when the straight
//! segment joining them never enters the open interior of any box. A segment
//! that only grazes a face, edge or corner (within [`GRAZE_TOLERANCE`]) is
//! not blocked.

use serde::{Deserialize, Serialize};

/// Segments closer than this to a face are treated as grazing, not entering.
pub const GRAZE_TOLERANCE: f64 = 1e-9;

/// A point in venue coordinates, meters. `z` is the altitude above ground.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(&self, other: &Position3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Lexicographic comparison on (x, y, z).
    pub fn lex_cmp(&self, other: &Position3) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then(self.y.total_cmp(&other.y))
            .then(self.z.total_cmp(&other.z))
    }
}

impl std::fmt::Display for Position3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// An axis-aligned building footprint extruded from the ground to `height`.
///
/// `floors`, `rooms_x` and `rooms_y` are carried as metadata; the radio model
/// treats the building as an opaque box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Building {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub height: f64,
    #[serde(default = "one")]
    pub floors: u32,
    #[serde(default = "one")]
    pub rooms_x: u32,
    #[serde(default = "one")]
    pub rooms_y: u32,
}

fn one() -> u32 {
    1
}

impl Building {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, height: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
            height,
            floors: 1,
            rooms_x: 1,
            rooms_y: 1,
        }
    }

    pub fn lower(&self) -> [f64; 3] {
        [self.x_min, self.y_min, 0.0]
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.x_max, self.y_max, self.height]
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    /// True when `p` lies strictly inside the box, more than the grazing
    /// tolerance away from every face.
    pub fn contains_interior(&self, p: &Position3) -> bool {
        let lo = self.lower();
        let hi = self.upper();
        p.to_array()
            .iter()
            .zip(lo.iter().zip(hi.iter()))
            .all(|(&c, (&l, &h))| c > l + GRAZE_TOLERANCE && c < h - GRAZE_TOLERANCE)
    }

    /// True when (x, y) is inside the closed footprint.
    pub fn footprint_contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn is_valid(&self) -> bool {
        [self.x_min, self.x_max, self.y_min, self.y_max, self.height]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max
            && self.height > 0.0
    }
}

/// Rectangular venue `[0, width] x [0, depth]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Venue {
    pub width: f64,
    pub depth: f64,
}

impl Venue {
    pub fn center(&self) -> (f64, f64) {
        (0.5 * self.width, 0.5 * self.depth)
    }

    pub fn area(&self) -> f64 {
        self.width * self.depth
    }

    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && x <= self.width && y >= 0.0 && y <= self.depth
    }

    pub fn contains_footprint(&self, b: &Building) -> bool {
        self.contains_xy(b.x_min, b.y_min) && self.contains_xy(b.x_max, b.y_max)
    }
}

/// Closed interval in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    /// Position of `v` inside the interval mapped to [0, 1]. A degenerate
    /// interval maps everything to 0.
    pub fn normalize(&self, v: f64) -> f64 {
        let span = self.span();
        if span > 0.0 {
            ((v - self.min) / span).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Region the UAV may occupy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionZone {
    pub x: Interval,
    pub y: Interval,
    pub z: Interval,
}

impl ActionZone {
    pub fn is_valid(&self) -> bool {
        [self.x, self.y, self.z]
            .iter()
            .all(|i| i.min.is_finite() && i.max.is_finite() && i.min <= i.max)
            && self.z.min >= 0.0
    }

    pub fn contains(&self, p: &Position3) -> bool {
        self.x.contains(p.x) && self.y.contains(p.y) && self.z.contains(p.z)
    }

    pub fn clamp(&self, p: &Position3) -> Position3 {
        Position3::new(self.x.clamp(p.x), self.y.clamp(p.y), self.z.clamp(p.z))
    }

    pub fn normalize(&self, p: &Position3) -> [f64; 3] {
        [
            self.x.normalize(p.x),
            self.y.normalize(p.y),
            self.z.normalize(p.z),
        ]
    }
}

/// Slab test: does the closed segment `p0 -> p1` enter the open interior of
/// `b`? Touching a face, edge or vertex does not count.
pub fn segment_intersects_box(p0: &Position3, p1: &Position3, b: &Building) -> bool {
    let start = p0.to_array();
    let end = p1.to_array();
    let lo = b.lower();
    let hi = b.upper();

    let mut t_enter = 0.0_f64;
    let mut t_exit = 1.0_f64;
    for axis in 0..3 {
        let lo = lo[axis] + GRAZE_TOLERANCE;
        let hi = hi[axis] - GRAZE_TOLERANCE;
        if lo >= hi {
            return false;
        }
        let origin = start[axis];
        let delta = end[axis] - origin;
        if delta == 0.0 {
            if origin <= lo || origin >= hi {
                return false;
            }
            continue;
        }
        let inv = 1.0 / delta;
        let (mut t0, mut t1) = ((lo - origin) * inv, (hi - origin) * inv);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
        if t_enter >= t_exit {
            return false;
        }
    }
    true
}

pub fn has_los(uav: &Position3, ue: &Position3, buildings: &[Building]) -> bool {
    !buildings.iter().any(|b| segment_intersects_box(uav, ue, b))
}

/// Number of ground users with a clear line of sight to the UAV.
pub fn count_los(uav: &Position3, ues: &[Position3], buildings: &[Building]) -> usize {
    ues.iter().filter(|ue| has_los(uav, ue, buildings)).count()
}

pub fn inside_any_building(p: &Position3, buildings: &[Building]) -> bool {
    buildings.iter().any(|b| b.contains_interior(p))
}

/// Clamp a proposed UAV position into the zone. If the clamped point would
/// sit inside a building the move is rejected and `previous` is returned.
pub fn clamp_to_zone(
    proposed: &Position3,
    previous: &Position3,
    zone: &ActionZone,
    buildings: &[Building],
) -> Position3 {
    let clamped = zone.clamp(proposed);
    if inside_any_building(&clamped, buildings) {
        *previous
    } else {
        clamped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block() -> Building {
        Building::new(40.0, 60.0, 40.0, 60.0, 15.0)
    }

    #[test]
    fn diagonal_through_block_is_blocked() {
        let p0 = Position3::new(0.0, 0.0, 10.0);
        let p1 = Position3::new(100.0, 100.0, 10.0);
        assert!(segment_intersects_box(&p0, &p1, &block()));
    }

    #[test]
    fn segment_above_roof_is_clear() {
        let p0 = Position3::new(0.0, 0.0, 50.0);
        let p1 = Position3::new(100.0, 100.0, 50.0);
        assert!(!segment_intersects_box(&p0, &p1, &block()));
    }

    #[test]
    fn endpoint_inside_is_blocked() {
        let inside = Position3::new(50.0, 50.0, 5.0);
        for far in [
            Position3::new(0.0, 0.0, 0.0),
            Position3::new(51.0, 50.0, 5.0),
            Position3::new(200.0, -30.0, 80.0),
        ] {
            assert!(segment_intersects_box(&inside, &far, &block()));
            assert!(segment_intersects_box(&far, &inside, &block()));
        }
        // Degenerate segment that is a single interior point.
        assert!(segment_intersects_box(&inside, &inside, &block()));
    }

    #[test]
    fn grazing_faces_and_edges_is_clear() {
        let b = block();
        // Runs along the roof plane.
        assert!(!segment_intersects_box(
            &Position3::new(0.0, 50.0, 15.0),
            &Position3::new(100.0, 50.0, 15.0),
            &b
        ));
        // Runs along a side face.
        assert!(!segment_intersects_box(
            &Position3::new(40.0, 0.0, 5.0),
            &Position3::new(40.0, 100.0, 5.0),
            &b
        ));
        // Touches a vertical edge only.
        assert!(!segment_intersects_box(
            &Position3::new(30.0, 50.0, 5.0),
            &Position3::new(50.0, 30.0, 5.0),
            &b
        ));
        // Touches the roof corner only.
        assert!(!segment_intersects_box(
            &Position3::new(30.0, 30.0, 5.0),
            &Position3::new(50.0, 50.0, 25.0),
            &b
        ));
    }

    #[test]
    fn los_rules() {
        let ue = Position3::new(10.0, 10.0, 1.5);
        let uav = Position3::new(90.0, 90.0, 10.0);
        assert!(has_los(&uav, &ue, &[]));
        assert!(!has_los(&uav, &ue, &[block()]));
        // Overhead with nothing on the vertical.
        let overhead = Position3::new(10.0, 10.0, 40.0);
        assert!(has_los(&overhead, &ue, &[block()]));
    }

    #[test]
    fn count_los_cases() {
        let ues = [
            Position3::new(10.0, 10.0, 1.5),
            Position3::new(90.0, 10.0, 1.5),
            Position3::new(10.0, 90.0, 1.5),
            Position3::new(90.0, 90.0, 1.5),
        ];
        let uav = Position3::new(50.0, 50.0, 30.0);
        assert_eq!(count_los(&uav, &ues, &[]), 4);

        // A user inside a courtyard of a tall building is never visible from
        // above it: model as a user whose segment must cross the box.
        let tower = Building::new(5.0, 15.0, 5.0, 15.0, 100.0);
        let enclosed = [Position3::new(10.0, 10.0, 1.5)];
        assert_eq!(count_los(&uav, &enclosed, &[tower]), 0);
    }

    #[test]
    fn clamp_rules() {
        let zone = ActionZone {
            x: Interval::new(0.0, 100.0),
            y: Interval::new(0.0, 100.0),
            z: Interval::new(1.0, 60.0),
        };
        let prev = Position3::new(30.0, 30.0, 10.0);
        let p = Position3::new(31.0, 30.0, 10.0);
        assert_eq!(clamp_to_zone(&p, &prev, &zone, &[block()]), p);

        let high = Position3::new(30.0, 30.0, 61.0);
        assert_eq!(
            clamp_to_zone(&high, &prev, &zone, &[block()]),
            Position3::new(30.0, 30.0, 60.0)
        );

        let into = Position3::new(41.0, 41.0, 10.0);
        let prev = Position3::new(39.0, 41.0, 10.0);
        assert!(block().contains_interior(&into));
        assert_eq!(clamp_to_zone(&into, &prev, &zone, &[block()]), prev);
    }

    #[test]
    fn normalize_maps_zone_to_unit_cube() {
        let zone = ActionZone {
            x: Interval::new(0.0, 100.0),
            y: Interval::new(0.0, 50.0),
            z: Interval::new(10.0, 10.0),
        };
        let n = zone.normalize(&Position3::new(25.0, 50.0, 10.0));
        assert_eq!(n, [0.25, 1.0, 0.0]);
    }
}
