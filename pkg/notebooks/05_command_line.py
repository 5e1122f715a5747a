# %% [markdown]
# # Driving everything from the command line
#
# Each analysis is also a `primelab` subcommand that writes CSV or JSON plus a
# manifest with checksums. Here the subcommands are called in-process.

# %%
import json
import tempfile
from pathlib import Path

from primelab.cli import main
from _paths import ZEROS

out = Path(tempfile.mkdtemp(prefix="primelab-"))
z = str(ZEROS)

# %%
main(["series", "--b", "1e7", "--samples", "2000", "--with-direct", "--zeros", z,
      "--out", str(out / "series.csv")])
print((out / "series.csv").read_text().splitlines()[:4])

# %%
main(["dist", "--b", "1e7", "--out", str(out / "dist.csv")])
print(len((out / "dist.csv").read_text().splitlines()) - 1, "levels written")

# %%
main(["mc", "--b", "1e5", "--sd-level", "0", "--sd-level", "2", "--trials", "50",
      "--zeros", z, "--out", str(out / "mc.json")])
print(json.dumps(json.loads((out / "mc.json").read_text()), indent=1))

# %%
code = main(["validate", "--zeros", z, "--quick", "--report", str(out / "report.json")])
for check in json.loads((out / "report.json").read_text())["checks"]:
    print("ok  " if check["passed"] else "FAIL", check["name"], "|", check["detail"])
print("exit code", code)
