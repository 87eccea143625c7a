"""QuickTalk: IR pinpointing plus association-free WiFi broadcast, simulated."""
