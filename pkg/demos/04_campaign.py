"""A small verification campaign, written as CSV.

Run: python3 demos/04_campaign.py   (the CLI equivalent is
     iwasawa-biquad verify --case 2,10 --bound 60 --format csv)
"""

from iwasawa_biquad import harness

rep = harness.verify([2, 10], bound=60)
print(harness.to_csv(rep), end="")
s = rep.summary
print(f"# {s['tuples']} tuples, {s['agree']} agree, {s['disagree']} disagree")
