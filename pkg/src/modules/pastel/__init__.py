# pastel module
