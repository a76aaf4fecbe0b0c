use super::ScheduleKind;

/// Sites kept between the furthest a wavefront can travel and the wall.
pub const WALL_MARGIN: usize = 5;

/// Distance a free-particle wavefront covers during `duration` under the
/// schedule. The hopping term moves amplitude at most at speed `s * k(t)`,
/// so the integral of the kinetic coefficient bounds the reach.
pub fn kinetic_travel(kind: ScheduleKind, kinetic_scale: f64, duration: f64) -> f64 {
    let integral = match kind {
        ScheduleKind::Static => duration,
        ScheduleKind::Adiabatic { final_time } => {
            let ramp = duration.min(final_time);
            0.5 * ramp * ramp / final_time + (duration - ramp)
        }
        ScheduleKind::ProjectedCooling { kappa, tau } => {
            duration + (kappa - 1.0) * tau * (1.0 - (-duration / tau).exp())
        }
    };
    kinetic_scale * integral
}

/// Smallest half-extent keeping boundary reflections out of the interior:
/// the interior radius, the wavefront reach, a dispersive-tail allowance
/// growing like `travel^(1/3)`, and a fixed margin.
pub fn reflection_free_half_extent(interior_radius: usize, travel: f64) -> usize {
    let travel = travel.max(0.0);
    interior_radius + travel.ceil() as usize + (3.0 * travel.cbrt()).ceil() as usize + WALL_MARGIN
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_free_travel() {
        assert_eq!(kinetic_travel(ScheduleKind::Static, 1.0, 50.0), 50.0);
        assert_eq!(reflection_free_half_extent(5, 50.0), 5 + 50 + 12 + 5);
    }

    #[test]
    fn cooling_travel_bounded_by_kappa_tau() {
        let t = kinetic_travel(ScheduleKind::projected_cooling(), 1.0, 12.0);
        assert!(t > 12.0 && t < 12.0 + 9.0 * 3.6);
    }

    #[test]
    fn adiabatic_ramp_halves_travel() {
        let t = kinetic_travel(ScheduleKind::Adiabatic { final_time: 12.0 }, 1.0, 12.0);
        assert_eq!(t, 6.0);
    }
}
