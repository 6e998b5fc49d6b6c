from typing import Sequence

from measurement import RunStatistics
from harness.experiment import ExperimentPlan

def generate_analysis(plan: ExperimentPlan, stats: Sequence[RunStatistics]) -> None:
    print(f"Analysis of plan with master seed: {plan.master_seed}")
    print("-" * 40)
    print(f"# of dataset entries: {len(plan.sequences)}")
    print(f"Window length(s): {', '.join(str(t) for t in sorted({s.tau for s in plan.sequences}))}")
    print(f"Noise profile: {plan.noise_label}")
    print(f"Total experiments (entries x n x N): {len(plan.sequences)} x {plan.n_reps} x "
          f"{plan.n_shots} = {plan.total_experiments}")
    print(f"Max eps: {max(s.eps for s in stats):.3e}")
    print(f"Mean eps: {sum(s.eps for s in stats) / len(stats):.3e}")
