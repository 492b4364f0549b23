# %% [markdown]
# # Robustness to acceleration and calibration size
#
# Mean SSIM over repeated random masks as the acceleration factor grows,
# and a sweep over ACS sizes given for a 372-column acquisition and scaled
# to the phantom width. The same tables come out of `jointrecon sweep`.

# %%
from jointrecon.sweep import SweepSetup, run_sweep

setup = SweepSetup()
rows = run_sweep("accel", [2, 3, 4, 5, 6], setup, repeats=3, seed=0)
for r in rows:
    if r["kind"] == "summary":
        print(f"R={r['value']}  ssim {r['ssim']:.3f} +- {r['ssim_std']:.3f}  nmse {r['nmse']:.4f}")

# %%
rows = run_sweep("acs", [1, 6, 12, 26, 56], setup, repeats=2, seed=0, acs_ref_width=372)
for r in rows:
    if r["kind"] == "summary":
        print(f"ACS {r['value']:>2} -> {r['acs']:>2} cols  ssim {r['ssim']:.3f} +- {r['ssim_std']:.3f}")
