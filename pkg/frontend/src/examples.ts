/** Bundled example gallery; each source is a complete .csp file. */

export interface Example {
  name: string;
  process: string;
  source: string;
}

export const EXAMPLES: Example[] = [
  {
    name: "VMS — two chocolates, then stop",
    process: "VMS",
    source: "VMS = coin -> choc -> coin -> choc -> STOP\n",
  },
  {
    name: "STOP — the idle loop",
    process: "S",
    source: "S = mu X . nil -> X\n",
  },
  {
    name: "SKIP — terminate successfully",
    process: "K",
    source: "K = mu X . tick -> X\n",
  },
  {
    name: "VMONE — one customer, choc or toffee",
    process: "VMONE",
    source: "VMONE = coin -> (choc -> SKIP | toffee -> SKIP)\n",
  },
];
