"""Named sweeps over the regimes of interest of the hybrid system.

Axis ranges not quoted numerically anywhere are read off the plots. The χ axis
of the Δ×χ maps stops at 250 s⁻¹: beyond ≈290 s⁻¹ the static (bistability)
condition fails near Δ ≈ κ/√3 and the linearization has no stable point.
"""

from __future__ import annotations

from dataclasses import dataclass

from model.params import OMEGA_M_BASE

from .grid import Axis, SweepSpec


@dataclass(frozen=True)
class FigurePreset:
    name: str
    description: str
    spec: SweepSpec


def _map_spec(name: str, negativity: str) -> SweepSpec:
    return SweepSpec(
        name=name,
        axes=(
            Axis("detuning", OMEGA_M_BASE / 20.0, 3.0 * OMEGA_M_BASE, 60),
            Axis("chi", 5.0, 250.0, 60),
        ),
        links={"zeta": "chi"},
        fields=(negativity, "e_am", "stable", "stability_margin"),
    )


PRESETS: dict[str, FigurePreset] = {
    p.name: p
    for p in (
        FigurePreset(
            name="fig2a",
            description="E_AC over detuning and coupling (ζ = χ, T = 10 μK)",
            spec=_map_spec("fig2a", "e_ac"),
        ),
        FigurePreset(
            name="fig2b",
            description="E_MC over detuning and coupling (ζ = χ, T = 10 μK)",
            spec=_map_spec("fig2b", "e_mc"),
        ),
        FigurePreset(
            name="fig2c",
            description="E_AC and E_MC against temperature at Δ = 2ω_m, χ = ζ = 100 s⁻¹",
            spec=SweepSpec(
                name="fig2c",
                axes=(Axis("temperature", 1e-6, 1e-3, 40, "log"),),
                fields=("e_ac", "e_mc", "e_am", "stable"),
            ),
        ),
        FigurePreset(
            name="fig3a",
            description="E_AC and E_MC against ζ/χ ∈ [0.5, 2] at Δ = 2ω_m, χ = 100 s⁻¹",
            spec=SweepSpec(
                name="fig3a",
                axes=(Axis("zeta", 50.0, 200.0, 31),),
                fields=("e_ac", "e_mc", "e_am", "stable"),
            ),
        ),
        FigurePreset(
            name="fig3b",
            description="E_AC and E_MC against Ω/ω_m ∈ [0.5, 3] at T = 1 μK, F = 4×10⁴",
            spec=SweepSpec(
                name="fig3b",
                axes=(Axis("Omega", 0.5 * OMEGA_M_BASE, 3.0 * OMEGA_M_BASE, 51),),
                overrides={"temperature": 1e-6, "finesse": 4.0e4},
                fields=("e_ac", "e_mc", "e_am", "stable"),
            ),
        ),
        FigurePreset(
            name="fig4",
            description="One-vs-two negativities and G_tri proxy against temperature (Ω = ω_m, χ = ζ)",
            spec=SweepSpec(
                name="fig4",
                axes=(Axis("temperature", 1e-6, 1e-1, 41, "log"),),
                fields=(
                    "e_a_mc",
                    "e_m_ac",
                    "e_c_am",
                    "e_ac",
                    "e_mc",
                    "g_tri_proxy",
                    "tripartite_class",
                ),
            ),
        ),
    )
}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"Unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
