"""Small benchmark sweep rendered as CSV.

Each row is one problem size; per method the table reports the median wall
time of three runs, the mean radius ratio against the Krawczyk reference,
the verification flag, and the containment rate over sampled member
solutions.  The same sweep is available from the command line:

    sylvenc bench --family kyc31 --sizes 5,10,20 --methods mkw,itr --samples 50
"""

from sylvenc import run_benchmark
from sylvenc.bench import render_csv

code, records = run_benchmark(
    family="kyc31",
    sizes=(5, 10, 20),
    alpha=1e-6,
    seed=7,
    methods=("mkw", "itr"),
    samples=50,
)

print(render_csv(records, ("mkw", "itr")))
print("exit code:", code)
