"""Background traffic: periodic CoAP sessions and the coexisting download."""

from quicktalk_sim.traffic.coap_session import AP_NODE, CoapConfig, CoapSession, run_coap_session
from quicktalk_sim.traffic.download_flow import DownloadConfig, DownloadFlow, run_download

__all__ = [
    "AP_NODE",
    "CoapConfig",
    "CoapSession",
    "DownloadConfig",
    "DownloadFlow",
    "run_coap_session",
    "run_download",
]
