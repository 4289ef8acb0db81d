//! Shared fixtures for the benchmark targets.

use ctqw_core::lattice::{DefectLineParams, LatticeWindow, NodeState, TridiagonalHamiltonian};

/// Position-defect reference configuration (defect on the starting node).
pub fn position_defect() -> DefectLineParams {
    DefectLineParams::new(2.0, 1.0, 3.0, 0.0, 0).expect("valid parameters")
}

/// Transition-defect configuration with two bound states.
pub fn transition_defect() -> DefectLineParams {
    DefectLineParams::new(2.0, 1.0, 0.0, 0.5, 0).expect("valid parameters")
}

/// Window and basis state sized for t = 30 evolutions.
pub fn evolution_setup(params: &DefectLineParams) -> (LatticeWindow, NodeState) {
    let window = LatticeWindow::for_evolution(params, 0, 30.0, 40).expect("window");
    let psi0 = NodeState::basis(0, &window).expect("basis state");
    (window, psi0)
}

/// Truncated Hamiltonian of the given radius.
pub fn hamiltonian(params: &DefectLineParams, radius: usize) -> TridiagonalHamiltonian {
    let window = LatticeWindow::new(0, radius).expect("window");
    TridiagonalHamiltonian::build(params, &window).expect("hamiltonian")
}
